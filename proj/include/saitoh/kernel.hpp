#pragma once

// Point values of weighted Bergman kernels, boundary Hardy kernels over the
// distinguished boundary S, mixed-face Hardy kernels over dM, and their
// jet-constrained generalizations, all through Gram matrices plus
// evaluation / Taylor-jet vectors.

#include "saitoh/basis.hpp"

namespace saitoh {

using MultiIndex = std::vector<int>;

// ---------------------------------------------------------------------------
// Jet ideals and targets

class JetIdeal {
 public:
  enum class Kind { Box, Multiplier, Maximal };

  /// Germs whose Taylor coefficients vanish on the whole box {alpha <= beta}.
  static JetIdeal box(MultiIndex beta) {
    for (int b : beta)
      if (b < 0) throw std::invalid_argument("box ideal needs beta >= 0");
    JetIdeal i(Kind::Box);
    i.beta_ = std::move(beta);
    return i;
  }

  /// Multiplier ideal of psi = max 2 p_j G_j: contains alpha iff
  /// sum (alpha_j + 1) / p_j > 1.
  static JetIdeal multiplier(std::vector<double> p) {
    for (double pj : p)
      if (!(pj > 0.0)) throw std::invalid_argument("multiplier ideal needs p > 0");
    JetIdeal i(Kind::Multiplier);
    i.p_ = std::move(p);
    return i;
  }

  static JetIdeal maximal(std::size_t nvars) {
    JetIdeal i(Kind::Box);
    i.beta_.assign(nvars, 0);
    return i;
  }

  Kind kind() const { return kind_; }
  std::size_t nvars() const { return kind_ == Kind::Box ? beta_.size() : p_.size(); }
  const MultiIndex& box_beta() const { return beta_; }

  bool contains(const MultiIndex& alpha) const {
    if (alpha.size() != nvars()) throw std::invalid_argument("multi-index arity mismatch");
    for (int a : alpha)
      if (a < 0) throw std::invalid_argument("multi-index must be componentwise >= 0");
    if (kind_ == Kind::Box) {
      for (std::size_t j = 0; j < alpha.size(); ++j)
        if (alpha[j] > beta_[j]) return true;
      return false;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) s += (alpha[j] + 1.0) / p_[j];
    return s > 1.0 + 1e-12;
  }

  /// The finite complement {alpha : alpha not in I} (box, or the set E1 of
  /// the multiplier criterion).
  std::vector<MultiIndex> constrained_multiindices() const {
    std::vector<MultiIndex> out;
    if (kind_ == Kind::Box) {
      MultiIndex alpha(beta_.size(), 0);
      for (;;) {
        out.push_back(alpha);
        std::size_t j = alpha.size();
        bool done = true;
        while (j-- > 0) {
          if (++alpha[j] <= beta_[j]) {
            done = false;
            break;
          }
          alpha[j] = 0;
        }
        if (done) break;
      }
      return out;
    }
    MultiIndex cap(p_.size());
    for (std::size_t j = 0; j < p_.size(); ++j)
      cap[j] = std::max(0, static_cast<int>(std::ceil(p_[j])) - 1);
    MultiIndex alpha(p_.size(), 0);
    for (;;) {
      if (!contains(alpha)) out.push_back(alpha);
      std::size_t j = alpha.size();
      bool done = true;
      while (j-- > 0) {
        if (++alpha[j] <= cap[j]) {
          done = false;
          break;
        }
        alpha[j] = 0;
      }
      if (done) break;
    }
    return out;
  }

 private:
  explicit JetIdeal(Kind k) : kind_(k) {}
  Kind kind_;
  MultiIndex beta_;
  std::vector<double> p_;
};

inline bool ideal_contains(const JetIdeal& ideal, const MultiIndex& alpha) {
  return ideal.contains(alpha);
}

/// Target germ h0 = sum d_alpha (w - z0)^alpha.
struct JetTarget {
  std::vector<std::pair<MultiIndex, complexd>> terms;

  static JetTarget one(std::size_t nvars) {
    return JetTarget{{{MultiIndex(nvars, 0), complexd{1.0, 0.0}}}};
  }

  static JetTarget monomial(MultiIndex alpha, complexd d = {1.0, 0.0}) {
    return JetTarget{{{std::move(alpha), d}}};
  }

  complexd coefficient(const MultiIndex& alpha) const {
    for (const auto& [a, d] : terms)
      if (a == alpha) return d;
    return {0.0, 0.0};
  }

  int max_component_degree() const {
    int m = 0;
    for (const auto& [a, d] : terms)
      for (int aj : a) m = std::max(m, aj);
    return m;
  }

  /// (h0, z0) must not lie in the ideal: some coefficient outside I nonzero.
  bool admissible_for(const JetIdeal& ideal) const {
    for (const auto& [a, d] : terms)
      if (std::abs(d) > 0.0 && !ideal.contains(a)) return true;
    return false;
  }
};

/// h0 = prod h_j with per-factor coefficient lists in (w_j - z0_j).
inline JetTarget product_target(const std::vector<std::vector<complexd>>& factor_polys) {
  JetTarget t;
  t.terms.push_back({MultiIndex{}, complexd{1.0, 0.0}});
  for (const std::vector<complexd>& hj : factor_polys) {
    std::vector<std::pair<MultiIndex, complexd>> next;
    for (const auto& [alpha, d] : t.terms)
      for (std::size_t m = 0; m < hj.size(); ++m) {
        if (hj[m] == complexd{0.0, 0.0}) continue;
        MultiIndex a = alpha;
        a.push_back(static_cast<int>(m));
        next.push_back({std::move(a), d * hj[m]});
      }
    t.terms = std::move(next);
  }
  return t;
}

/// Vanishing order of a one-variable coefficient list.
inline int poly_order(const std::vector<complexd>& coeffs) {
  for (std::size_t m = 0; m < coeffs.size(); ++m)
    if (std::abs(coeffs[m]) > 0.0) return static_cast<int>(m);
  throw std::invalid_argument("zero polynomial has no vanishing order");
}

// ---------------------------------------------------------------------------
// Reports and solver plumbing

struct KernelReport {
  double value = 0.0;
  int truncation = 0;
  int boundary_nodes = 0;
  int radial_nodes = 0;
  int angular_nodes = 0;
  double condition = 1.0;
  double ridge_shift = 0.0;
  bool used_kkt_fallback = false;
  VectorXcd minimizer;  // raw-basis coefficients of the extremal function
};

struct QuadratureSizes {
  int boundary = 256;
  int radial = 48;
  int angular = 128;
};

/// Scale node counts with the truncation so basis-pair frequencies never
/// alias on the trapezoid rules.
inline QuadratureSizes effective_sizes(QuadratureSizes q, int degree) {
  const int band = 4 * degree + 64;
  q.boundary = std::max(q.boundary, band + band % 2);
  q.angular = std::max(q.angular, band);
  q.radial = std::max(q.radial, 2 * degree + 8);
  return q;
}

namespace detail {

/// Jet constraint rows: for every constrained alpha (not in I, componentwise
/// within the truncation), require the Taylor coefficient of f - h0 at z0 to
/// vanish. Returns C (rows x dim) and d.
inline void jet_constraints(const ProductBasis& basis, const JetIdeal& ideal,
                            const JetTarget& h0, MatrixXcd& c, VectorXcd& d) {
  const std::size_t nfac = basis.dimension();
  if (ideal.nvars() != nfac) throw std::invalid_argument("ideal arity mismatch");
  const std::vector<MultiIndex> constrained = ideal.constrained_multiindices();
  if (constrained.empty()) throw std::invalid_argument("ideal is the whole ring");
  int max_order = h0.max_component_degree();
  for (const MultiIndex& a : constrained)
    for (int aj : a) max_order = std::max(max_order, aj);
  for (std::size_t j = 0; j < nfac; ++j) {
    if (max_order > basis.factor(j).degree() - 2)
      throw std::invalid_argument(
          "truncation too small for the jet constraints: need max constrained "
          "degree <= N - 2");
  }
  std::vector<MatrixXcd> taylor(nfac);
  for (std::size_t j = 0; j < nfac; ++j)
    taylor[j] = basis.factor(j).taylor_matrix(max_order);

  c = MatrixXcd::Zero(constrained.size(), basis.size());
  d = VectorXcd::Zero(constrained.size());
  for (std::size_t r = 0; r < constrained.size(); ++r) {
    const MultiIndex& alpha = constrained[r];
    d(r) = h0.coefficient(alpha);
    for (std::size_t flat = 0; flat < basis.size(); ++flat) {
      const std::vector<std::size_t> multi = basis.unflatten(flat);
      complexd t = 1.0;
      for (std::size_t j = 0; j < nfac; ++j) {
        t *= taylor[j](alpha[j], multi[j]);
        if (t == complexd{0.0, 0.0}) break;
      }
      c(r, flat) = t;
    }
  }
}

inline KernelReport kernel_from_gram(const MatrixXcd& gram, const ProductBasis& basis,
                                     const std::vector<complexd>& z0,
                                     const QuadratureSizes& q) {
  GramSolver solver(gram);
  const VectorXcd v = basis.eval_all(std::span<const complexd>(z0));
  KernelReport r;
  r.value = solver.kernel_value(v);
  r.condition = solver.condition_estimate();
  r.ridge_shift = solver.ridge_shift();
  r.boundary_nodes = q.boundary;
  r.radial_nodes = q.radial;
  r.angular_nodes = q.angular;
  r.minimizer = solver.kernel_section(v);
  if (!(r.value > 0.0) || !std::isfinite(r.value))
    throw std::domain_error("kernel value must be positive and finite");
  return r;
}

inline KernelReport min_from_gram(const MatrixXcd& gram, const ProductBasis& basis,
                                  const JetIdeal& ideal, const JetTarget& h0,
                                  const QuadratureSizes& q) {
  if (!h0.admissible_for(ideal))
    throw std::invalid_argument("target germ lies in the ideal: (h0, z0) in I");
  MatrixXcd c;
  VectorXcd d;
  jet_constraints(basis, ideal, h0, c, d);
  GramSolver solver(gram);
  GramSolver::ConstrainedMin m = solver.constrained_min(c, d);
  if (m.constraint_residual > 1e-8)
    throw std::domain_error("jet constraints are numerically infeasible");
  KernelReport r;
  r.value = 1.0 / m.norm_squared;
  r.condition = solver.condition_estimate();
  r.ridge_shift = solver.ridge_shift();
  r.used_kkt_fallback = m.used_kkt_fallback;
  r.boundary_nodes = q.boundary;
  r.radial_nodes = q.radial;
  r.angular_nodes = q.angular;
  r.minimizer = m.minimizer;
  if (!(r.value > 0.0) || !std::isfinite(r.value))
    throw std::domain_error("kernel value must be positive and finite");
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Area (Bergman) Grams for product weights

/// Standard per-factor bases for a product domain.
inline ProductBasis standard_basis(const ProductDomain& p, int degree) {
  std::vector<FactorBasis> factors;
  factors.reserve(p.dimension());
  for (std::size_t j = 0; j < p.dimension(); ++j)
    factors.push_back(FactorBasis::standard(p.factors[j], p.basepoint[j], degree));
  return ProductBasis(std::move(factors));
}

/// Area Gram of the truncated space with weight c(-psi) prod e^{-phi_j}.
/// Dispatch: direct quadrature in one variable; Kronecker of factor Grams
/// when the weight is separable; the split radial rule for a genuinely
/// coupled c on centered disk factors. `quad_domain` may be a sublevel
/// region of `green_domain` (psi always refers to the latter).
inline MatrixXcd bergman_gram(const ProductBasis& basis, const ProductDomain& quad_domain,
                              const ProductDomain& green_domain, const GreenBundle& greens,
                              const ProductWeight& weight, const QuadratureSizes& q) {
  const std::size_t nfac = basis.dimension();
  if (weight.phi.size() != nfac || weight.exponents.size() != nfac)
    throw std::invalid_argument("product weight arity mismatch");

  if (nfac == 1) {
    const Domain& dom = quad_domain.factors[0];
    const Domain& gdom = green_domain.factors[0];
    const complexd z0 = green_domain.basepoint[0];
    // rotation-invariant weights: angular orthogonality makes the Gram
    // diagonal, so a radial rule suffices (and stays cheap at high degree)
    const bool centered_expansion =
        basis.factor(0).kind() == BasisKind::LaurentAtCenter ||
        std::abs(z0 - gdom.center()) == 0.0;
    if (!weight.coupled() && centered_expansion &&
        weight.phi[0].is_radial(gdom, z0)) {
      const double r0 = dom.is_annulus() ? dom.inner_radius() : 0.0;
      std::vector<double> rx, rw;
      gauss_legendre_ab(std::max(q.radial, 2 * basis.factor(0).degree() + 16), r0,
                        dom.outer_radius(), rx, rw);
      const FactorBasis& fb = basis.factor(0);
      MatrixXcd gram = MatrixXcd::Zero(fb.size(), fb.size());
      for (std::size_t i = 0; i < fb.size(); ++i) {
        double acc = 0.0;
        for (std::size_t x = 0; x < rx.size(); ++x)
          acc += std::pow(rx[x], 2 * fb.exponent(i) + 1) *
                 weight.phi[0].weight(gdom.center() + rx[x], gdom, z0) * rw[x];
        gram(i, i) = kTwoPi * fb.scale(i) * fb.scale(i) * acc;
      }
      return gram;
    }
    const AreaQuadrature aq = area_quadrature(dom, q.radial, q.angular);
    const GreenSolution& g = greens.greens[0];
    const double p0 = weight.exponents[0];
    return gram_area(basis.factor(0), aq, [&](complexd z) {
      double w = weight.phi[0].weight(z, gdom, z0);
      if (weight.coupled()) w *= (*weight.c)(-2.0 * p0 * g.value(z));
      return w;
    });
  }

  if (!weight.coupled()) {
    std::vector<MatrixXcd> grams(nfac);
    for (std::size_t j = 0; j < nfac; ++j) {
      const Domain& dj = quad_domain.factors[j];
      const AreaQuadrature aq = area_quadrature(dj, q.radial, q.angular);
      grams[j] = gram_area(basis.factor(j), aq, [&](complexd z) {
        return weight.phi[j].weight(z, green_domain.factors[j], green_domain.basepoint[j]);
      });
    }
    return kron_all(grams);
  }

  // coupled route: centered disks with radial weights and monomial bases
  std::vector<double> quad_radii(nfac), green_radii(nfac);
  for (std::size_t j = 0; j < nfac; ++j) {
    const Domain& dj = green_domain.factors[j];
    if (!dj.is_disk() || std::abs(green_domain.basepoint[j] - dj.center()) != 0.0 ||
        !weight.phi[j].is_radial(dj, green_domain.basepoint[j]) ||
        basis.factor(j).kind() != BasisKind::MonomialAtPoint)
      throw std::invalid_argument(
          "coupled c(-psi) weights need centered disk factors with radial "
          "weights");
    quad_radii[j] = quad_domain.factors[j].radius();
    green_radii[j] = dj.radius();
  }
  return gram_area_coupled_radial(basis, quad_radii, green_radii, weight, weight.phi,
                                  std::max(q.radial, 64));
}

// ---------------------------------------------------------------------------
// Kernel operations

inline KernelReport bergman_kernel_at(const ProductDomain& p, const ProductWeight& w,
                                      int degree, const QuadratureSizes& q = {}) {
  const QuadratureSizes eq = effective_sizes(q, degree);
  const ProductBasis basis = standard_basis(p, degree);
  const GreenBundle greens = GreenBundle::solve(p);
  const MatrixXcd gram = bergman_gram(basis, p, p, greens, w, eq);
  KernelReport r = detail::kernel_from_gram(gram, basis, p.basepoint, eq);
  r.truncation = degree;
  return r;
}

inline KernelReport bergman_min_at(const ProductDomain& p, const ProductWeight& w,
                                   const JetIdeal& ideal, const JetTarget& h0, int degree,
                                   const QuadratureSizes& q = {}) {
  const QuadratureSizes eq = effective_sizes(q, degree);
  const ProductBasis basis = standard_basis(p, degree);
  const GreenBundle greens = GreenBundle::solve(p);
  const MatrixXcd gram = bergman_gram(basis, p, p, greens, w, eq);
  KernelReport r = detail::min_from_gram(gram, basis, ideal, h0, eq);
  r.truncation = degree;
  return r;
}

/// Boundary weight lambda_j on one factor's boundary circle(s):
/// scale x (dG_j/dv)^{-1 if inv_poisson} x e^{-phi_j}.
struct BoundaryWeight {
  bool inv_poisson = true;
  double scale = 1.0;
  FactorWeight phi = FactorWeight::zero();
};

inline MatrixXcd hardy_S_gram(const ProductBasis& basis, const ProductDomain& p,
                              const GreenBundle& greens,
                              const std::vector<BoundaryWeight>& lambda,
                              const QuadratureSizes& q) {
  const std::size_t nfac = basis.dimension();
  if (lambda.size() != nfac) throw std::invalid_argument("one boundary weight per factor");
  std::vector<MatrixXcd> grams(nfac);
  for (std::size_t j = 0; j < nfac; ++j) {
    const Domain& dj = p.factors[j];
    const std::vector<BoundaryQuadrature> bq = boundary_quadrature(dj, q.boundary);
    const GreenSolution& g = greens.greens[j];
    const BoundaryWeight& lam = lambda[j];
    grams[j] = gram_boundary(basis.factor(j), bq, [&](complexd z) {
      double v = lam.scale * lam.phi.weight(z, dj, p.basepoint[j]);
      if (lam.inv_poisson) v /= std::abs(g.gradient(z));
      return v;
    });
  }
  return kron_all(grams);
}

inline KernelReport hardy_S_kernel_at(const ProductDomain& p,
                                      const std::vector<BoundaryWeight>& lambda,
                                      int degree, const QuadratureSizes& q = {}) {
  const QuadratureSizes eq = effective_sizes(q, degree);
  const ProductBasis basis = standard_basis(p, degree);
  const GreenBundle greens = GreenBundle::solve(p);
  const MatrixXcd gram = hardy_S_gram(basis, p, greens, lambda, eq);
  KernelReport r = detail::kernel_from_gram(gram, basis, p.basepoint, eq);
  r.truncation = degree;
  return r;
}

inline KernelReport hardy_S_min_at(const ProductDomain& p,
                                   const std::vector<BoundaryWeight>& lambda,
                                   const JetIdeal& ideal, const JetTarget& h0, int degree,
                                   const QuadratureSizes& q = {}) {
  const QuadratureSizes eq = effective_sizes(q, degree);
  const ProductBasis basis = standard_basis(p, degree);
  const GreenBundle greens = GreenBundle::solve(p);
  const MatrixXcd gram = hardy_S_gram(basis, p, greens, lambda, eq);
  KernelReport r = detail::min_from_gram(gram, basis, ideal, h0, eq);
  r.truncation = degree;
  return r;
}

inline KernelReport hardy_dM_kernel_at(const ProductDomain& p,
                                       const std::vector<double>& exponents,
                                       const std::vector<FactorWeight>& phi, int degree,
                                       const QuadratureSizes& q = {}) {
  const QuadratureSizes eq = effective_sizes(q, degree);
  const ProductBasis basis = standard_basis(p, degree);
  const GreenBundle greens = GreenBundle::solve(p);
  const MatrixXcd gram = gram_face_sum(basis, greens, exponents, phi, eq.boundary,
                                       eq.radial, eq.angular);
  KernelReport r = detail::kernel_from_gram(gram, basis, p.basepoint, eq);
  r.truncation = degree;
  return r;
}

inline KernelReport hardy_dM_min_at(const ProductDomain& p,
                                    const std::vector<double>& exponents,
                                    const std::vector<FactorWeight>& phi,
                                    const JetIdeal& ideal, const JetTarget& h0,
                                    int degree, const QuadratureSizes& q = {}) {
  const QuadratureSizes eq = effective_sizes(q, degree);
  const ProductBasis basis = standard_basis(p, degree);
  const GreenBundle greens = GreenBundle::solve(p);
  const MatrixXcd gram = gram_face_sum(basis, greens, exponents, phi, eq.boundary,
                                       eq.radial, eq.angular);
  KernelReport r = detail::min_from_gram(gram, basis, ideal, h0, eq);
  r.truncation = degree;
  return r;
}

// ---------------------------------------------------------------------------
// Cauchy recovery of interior values

struct CauchyValue {
  complexd value{0.0, 0.0};
  bool accuracy_warning = false;  // z within 1e-3 x scale of the boundary
};

/// (1/ 2 pi i) contour integral of f(w) / (w - z) dw over the full boundary,
/// from samples on the boundary quadrature. Both circles of an annulus are
/// traversed with the domain on the left (dw = i nu ds with nu the
/// domain-outward normal).
inline CauchyValue cauchy_extend(const std::vector<BoundaryQuadrature>& circles,
                                 const std::vector<std::vector<complexd>>& samples,
                                 complexd z, double domain_scale = 1.0) {
  if (samples.size() != circles.size())
    throw std::invalid_argument("one sample set per boundary circle");
  CauchyValue out;
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < circles.size(); ++c) {
    const BoundaryQuadrature& q = circles[c];
    if (samples[c].size() != q.size())
      throw std::invalid_argument("sample count does not match quadrature nodes");
    min_dist = std::min(min_dist,
                        std::abs(std::abs(z - q.circle_center) - q.circle_radius));
    complexd acc = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k)
      acc += samples[c][k] * q.outward_normals[k] * q.weights[k] / (q.nodes[k] - z);
    out.value += acc / kTwoPi;
  }
  out.accuracy_warning = min_dist < 1e-3 * domain_scale;
  return out;
}

}  // namespace saitoh
