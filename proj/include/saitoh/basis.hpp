#pragma once

// Truncated holomorphic bases on factors and products, Taylor-coefficient
// functionals at the basepoint, and weighted Gram assembly for area,
// boundary, distinguished-boundary, and mixed-face inner products.

#include <functional>

#include "saitoh/linalg.hpp"
#include "saitoh/weights.hpp"

namespace saitoh {

enum class BasisKind { MonomialAtPoint, LaurentAtCenter };

/// Finite Ritz basis on one factor. Elements are scaled pure powers,
/// b_i(z) = sigma_i (z - x)^{e_i} with x the basepoint (monomials) or the
/// factor center (Laurent); the scales keep raw Grams near unit diagonal.
class FactorBasis {
 public:
  FactorBasis(Domain dom, complexd z0, int degree, BasisKind kind)
      : dom_(std::move(dom)), z0_(z0), degree_(degree), kind_(kind) {
    if (degree < 0) throw std::invalid_argument("basis degree must be nonnegative");
    if (!dom_.contains(z0)) throw std::invalid_argument("basis point must be interior");
    if (kind == BasisKind::LaurentAtCenter && !dom_.is_annulus())
      throw std::invalid_argument("Laurent bases are for annulus factors");
    if (kind == BasisKind::MonomialAtPoint) {
      for (int k = 0; k <= degree; ++k) exps_.push_back(k);
      const double m = dom_.outer_radius() + std::abs(z0 - dom_.center());
      for (int k = 0; k <= degree; ++k) scales_.push_back(std::pow(m, -k));
    } else {
      for (int k = -degree; k <= degree; ++k) exps_.push_back(k);
      for (int k = -degree; k <= degree; ++k) {
        const double m =
            k >= 0 ? std::pow(dom_.outer_radius(), k) : std::pow(dom_.inner_radius(), k);
        scales_.push_back(1.0 / m);
      }
    }
  }

  /// Default choice per factor: monomials at z0 on disks, Laurent on annuli.
  static FactorBasis standard(const Domain& dom, complexd z0, int degree) {
    return FactorBasis(dom, z0, degree,
                       dom.is_annulus() ? BasisKind::LaurentAtCenter
                                        : BasisKind::MonomialAtPoint);
  }

  const Domain& domain() const { return dom_; }
  complexd basepoint() const { return z0_; }
  int degree() const { return degree_; }
  BasisKind kind() const { return kind_; }
  std::size_t size() const { return exps_.size(); }
  int exponent(std::size_t i) const { return exps_[i]; }
  double scale(std::size_t i) const { return scales_[i]; }

  complexd expansion_point() const {
    return kind_ == BasisKind::MonomialAtPoint ? z0_ : dom_.center();
  }

  complexd eval(std::size_t i, complexd z) const {
    return scales_[i] * std::pow(z - expansion_point(), exps_[i]);
  }

  VectorXcd eval_all(complexd z) const {
    VectorXcd v(size());
    for (std::size_t i = 0; i < size(); ++i) v(i) = eval(i, z);
    return v;
  }

  /// T(m, i) = m-th Taylor coefficient of b_i at the basepoint, m = 0..max_order.
  /// Exact for monomials; Cauchy integrals on a small circle (radius = half
  /// the distance to the boundary) for Laurent elements.
  MatrixXcd taylor_matrix(int max_order) const {
    MatrixXcd t = MatrixXcd::Zero(max_order + 1, size());
    if (kind_ == BasisKind::MonomialAtPoint) {
      for (std::size_t i = 0; i < size(); ++i)
        if (exps_[i] <= max_order) t(exps_[i], i) = scales_[i];
      return t;
    }
    const double sigma = 0.5 * dom_.boundary_distance(z0_);
    const int m = std::max(256, 8 * (degree_ + max_order + 1));
    std::vector<complexd> phase(m);
    for (int k = 0; k < m; ++k) {
      const double th = kTwoPi * k / m;
      phase[k] = complexd{std::cos(th), std::sin(th)};
    }
    for (std::size_t i = 0; i < size(); ++i) {
      std::vector<complexd> samples(m);
      for (int k = 0; k < m; ++k) samples[k] = eval(i, z0_ + sigma * phase[k]);
      double sp = 1.0;
      for (int ord = 0; ord <= max_order; ++ord) {
        complexd acc = 0.0;
        for (int k = 0; k < m; ++k)
          acc += samples[k] * std::conj(std::pow(phase[k], ord));
        t(ord, i) = acc / (static_cast<double>(m) * sp);
        sp *= sigma;
      }
    }
    return t;
  }

 private:
  Domain dom_;
  complexd z0_;
  int degree_;
  BasisKind kind_;
  std::vector<int> exps_;
  std::vector<double> scales_;
};

/// Tensor-product basis with row-major multi-index flattening.
class ProductBasis {
 public:
  explicit ProductBasis(std::vector<FactorBasis> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("product basis needs factors");
    dims_.reserve(factors_.size());
    std::size_t n = 1;
    for (const FactorBasis& f : factors_) {
      dims_.push_back(f.size());
      n *= f.size();
    }
    size_ = n;
  }

  std::size_t dimension() const { return factors_.size(); }
  std::size_t size() const { return size_; }
  const FactorBasis& factor(std::size_t j) const { return factors_[j]; }

  std::size_t flatten(std::span<const std::size_t> multi) const {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < dims_.size(); ++j) flat = flat * dims_[j] + multi[j];
    return flat;
  }

  std::vector<std::size_t> unflatten(std::size_t flat) const {
    std::vector<std::size_t> multi(dims_.size());
    for (std::size_t j = dims_.size(); j-- > 0;) {
      multi[j] = flat % dims_[j];
      flat /= dims_[j];
    }
    return multi;
  }

  complexd eval(std::size_t flat, std::span<const complexd> w) const {
    const std::vector<std::size_t> multi = unflatten(flat);
    complexd v = 1.0;
    for (std::size_t j = 0; j < dims_.size(); ++j) v *= factors_[j].eval(multi[j], w[j]);
    return v;
  }

  VectorXcd eval_all(std::span<const complexd> w) const {
    std::vector<VectorXcd> per(dims_.size());
    for (std::size_t j = 0; j < dims_.size(); ++j) per[j] = factors_[j].eval_all(w[j]);
    VectorXcd v = per[0];
    for (std::size_t j = 1; j < per.size(); ++j) {
      VectorXcd next(v.size() * per[j].size());
      for (Eigen::Index a = 0; a < v.size(); ++a)
        next.segment(a * per[j].size(), per[j].size()) = v(a) * per[j];
      v = std::move(next);
    }
    return v;
  }

 private:
  std::vector<FactorBasis> factors_;
  std::vector<std::size_t> dims_;
  std::size_t size_ = 1;
};

inline ProductBasis tensor_basis(std::vector<FactorBasis> factors) {
  return ProductBasis(std::move(factors));
}

// ---------------------------------------------------------------------------
// Gram assembly. Convention: G(i, j) = <b_j, b_i>, so <f, g> = c^H G a for
// f = sum a_k b_k, g = sum c_k b_k, and norms are a^H G a.

using PointWeight = std::function<double(complexd)>;

inline MatrixXcd gram_area(const FactorBasis& basis, const AreaQuadrature& quad,
                           const PointWeight& weight) {
  const std::size_t n = basis.size();
  MatrixXcd e(quad.size(), n);
  VectorXd w(quad.size());
  for (std::size_t x = 0; x < quad.size(); ++x) {
    const double wv = weight ? weight(quad.nodes[x]) : 1.0;
    if (!std::isfinite(wv)) throw std::domain_error("non-finite weight at area node");
    w(x) = wv * quad.weights[x];
    for (std::size_t i = 0; i < n; ++i) e(x, i) = basis.eval(i, quad.nodes[x]);
  }
  return e.adjoint() * w.asDiagonal() * e;
}

/// Boundary Gram with the 1/(2 pi) normalization, summed over all circles.
inline MatrixXcd gram_boundary(const FactorBasis& basis,
                               const std::vector<BoundaryQuadrature>& circles,
                               const PointWeight& weight) {
  const std::size_t n = basis.size();
  MatrixXcd g = MatrixXcd::Zero(n, n);
  for (const BoundaryQuadrature& q : circles) {
    MatrixXcd e(q.size(), n);
    VectorXd w(q.size());
    for (std::size_t x = 0; x < q.size(); ++x) {
      const double wv = weight ? weight(q.nodes[x]) : 1.0;
      if (!std::isfinite(wv)) throw std::domain_error("non-finite weight at boundary node");
      w(x) = wv * q.weights[x] / kTwoPi;
      for (std::size_t i = 0; i < n; ++i) e(x, i) = basis.eval(i, q.nodes[x]);
    }
    g += e.adjoint() * w.asDiagonal() * e;
  }
  return g;
}

/// Direct tensor-node assembly of a product area Gram with a general
/// pointwise weight on the product. Quadratic in the node count; intended
/// for small cross-checks against the Kronecker route.
inline MatrixXcd gram_area_product_direct(
    const ProductBasis& basis, const std::vector<AreaQuadrature>& quads,
    const std::function<double(std::span<const complexd>)>& weight) {
  const std::size_t nfac = basis.dimension();
  if (quads.size() != nfac) throw std::invalid_argument("one area rule per factor");
  std::vector<std::size_t> idx(nfac, 0);
  const std::size_t dim = basis.size();
  MatrixXcd g = MatrixXcd::Zero(dim, dim);
  std::vector<complexd> w(nfac);
  bool done = false;
  while (!done) {
    double qw = 1.0;
    for (std::size_t j = 0; j < nfac; ++j) {
      w[j] = quads[j].nodes[idx[j]];
      qw *= quads[j].weights[idx[j]];
    }
    const double wv = weight ? weight(w) : 1.0;
    const VectorXcd e = basis.eval_all(w);
    g.noalias() += (qw * wv) * (e.conjugate() * e.transpose());
    done = true;
    for (std::size_t j = nfac; j-- > 0;) {
      if (++idx[j] < quads[j].size()) {
        done = false;
        break;
      }
      idx[j] = 0;
    }
  }
  return g;
}

/// Mixed-face Gram for || . ||_{dM, rho}: one face per factor, each face the
/// Kronecker product of a weighted boundary Gram on that factor with plain
/// weighted area Grams on the others, scaled by 1/p_j. The face weight is
/// (1/p_j) (dG_j/dv)^{-1} prod_l e^{-phi_l}; c(-psi) is identically 1 on
/// every face because psi vanishes there.
inline MatrixXcd gram_face_sum(const ProductBasis& basis, const GreenBundle& greens,
                               const std::vector<double>& exponents,
                               const std::vector<FactorWeight>& phi,
                               int boundary_nodes, int radial_nodes, int angular_nodes) {
  const std::size_t nfac = basis.dimension();
  if (exponents.size() != nfac || phi.size() != nfac)
    throw std::invalid_argument("face weights: factor/weight count mismatch");
  std::vector<MatrixXcd> area(nfac), bdry(nfac);
  for (std::size_t j = 0; j < nfac; ++j) {
    const Domain& dj = basis.factor(j).domain();
    const complexd z0 = basis.factor(j).basepoint();
    const AreaQuadrature aq = area_quadrature(dj, radial_nodes, angular_nodes);
    area[j] = gram_area(basis.factor(j), aq,
                        [&](complexd z) { return phi[j].weight(z, dj, z0); });
    const std::vector<BoundaryQuadrature> bq = boundary_quadrature(dj, boundary_nodes);
    const GreenSolution& gj = greens.greens[j];
    bdry[j] = gram_boundary(basis.factor(j), bq, [&](complexd z) {
      return phi[j].weight(z, dj, z0) / std::abs(gj.gradient(z));
    });
  }
  const std::size_t dim = basis.size();
  MatrixXcd g = MatrixXcd::Zero(dim, dim);
  for (std::size_t face = 0; face < nfac; ++face) {
    std::vector<MatrixXcd> blocks(nfac);
    for (std::size_t j = 0; j < nfac; ++j) blocks[j] = (j == face) ? bdry[j] : area[j];
    g += (1.0 / exponents[face]) * kron_all(blocks);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Ordered orthonormal basis (strictly increasing vanishing order at z0)

struct OrderedONBasis {
  MatrixXcd coefficients;   // column i = raw-basis coefficients of element i
  std::vector<int> orders;  // strictly increasing vanishing orders at z0
};

/// Successive norm minimization: element i minimizes the norm among
/// functions with Taylor coefficients 0 below order k_i and 1 at k_i, then
/// is normalized. Infeasible orders (not attained by the span) are skipped.
inline OrderedONBasis ordered_on_basis(const MatrixXcd& gram, const FactorBasis& basis) {
  const std::size_t n = basis.size();
  const int max_order = 4 * basis.degree() + 8;
  const MatrixXcd taylor = basis.taylor_matrix(max_order);
  GramSolver solver(gram);
  OrderedONBasis out;
  out.coefficients = MatrixXcd::Zero(n, n);
  std::size_t produced = 0;
  for (int order = 0; order <= max_order && produced < n; ++order) {
    // feasibility: order attainable iff T(order, .) is not in the row span
    // of the lower-order rows restricted to their null space; probe by rank.
    MatrixXcd c(order + 1, n);
    c.topRows(order) = taylor.topRows(order);
    c.row(order) = taylor.row(order);
    Eigen::ColPivHouseholderQR<MatrixXcd> rank_probe(c.transpose());
    rank_probe.setThreshold(1e-10);
    if (static_cast<int>(rank_probe.rank()) < order + 1) continue;  // dependent rows
    VectorXcd d = VectorXcd::Zero(order + 1);
    d(order) = 1.0;
    GramSolver::ConstrainedMin m = solver.constrained_min(c, d);
    if (!(m.norm_squared > 0.0) || !std::isfinite(m.norm_squared)) continue;
    out.coefficients.col(produced) = m.minimizer / std::sqrt(m.norm_squared);
    out.orders.push_back(order);
    ++produced;
  }
  out.coefficients.conservativeResize(n, produced);
  return out;
}

// ---------------------------------------------------------------------------
// Coupled radial route: diagonal product-area Gram for centered disk factors
// with radial weights and a genuine c(-psi) coupling (n = 2).

namespace detail {

/// int_0^s r^{2k+1} e^{-phi(r)} dr for all k = 0..kmax at once.
inline VectorXd radial_moments(const std::function<double(double)>& wradial, double s,
                               int kmax, int nodes) {
  VectorXd out = VectorXd::Zero(kmax + 1);
  if (s <= 0.0) return out;
  std::vector<double> x, w;
  gauss_legendre_ab(nodes, 0.0, s, x, w);
  for (int i = 0; i < nodes; ++i) {
    const double base = wradial(x[i]) * w[i] * x[i];
    double pw = x[i] * x[i];
    double acc = base;
    for (int k = 0; k <= kmax; ++k) {
      out(k) += acc;
      acc *= pw;
    }
  }
  return out;
}

}  // namespace detail

/// Diagonal entries of the product area Gram on quad radii A_j for the
/// weight prod_j r^{2k_j} e^{-phi_j(r_j)} c(-max_j 2 p_j log(r_j / R_j)).
/// Exact angular orthogonality makes the Gram diagonal; the radial integral
/// is split along the surface where the max switches branch, so every piece
/// is smooth. Bidisc only.
inline MatrixXcd gram_area_coupled_radial(
    const ProductBasis& basis, const std::vector<double>& quad_radii,
    const std::vector<double>& green_radii, const ProductWeight& weight,
    const std::vector<FactorWeight>& phi, int radial_nodes) {
  const std::size_t nfac = basis.dimension();
  if (nfac != 2)
    throw std::invalid_argument(
        "coupled c(-psi) quadrature is implemented for two factors; "
        "use a separable c or a one-dimensional domain otherwise");
  const CWeight& c = *weight.c;
  const double p1 = weight.exponents[0], p2 = weight.exponents[1];
  const double r1g = green_radii[0], r2g = green_radii[1];
  const double a1 = quad_radii[0], a2 = quad_radii[1];
  const FactorBasis& f1 = basis.factor(0);
  const FactorBasis& f2 = basis.factor(1);
  const Domain& d1 = f1.domain();
  const Domain& d2 = f2.domain();

  const auto w1 = [&](double r) {
    return std::exp(-phi[0].phi(d1.center() + r, d1, f1.basepoint()));
  };
  const auto w2 = [&](double r) {
    return std::exp(-phi[1].phi(d2.center() + r, d2, f2.basepoint()));
  };
  const int k1max = f1.degree(), k2max = f2.degree();

  std::vector<double> x, wq;
  gauss_legendre_ab(radial_nodes, 0.0, a1, x, wq);
  MatrixXcd g = MatrixXcd::Zero(basis.size(), basis.size());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k1max + 1, k2max + 1);
  std::vector<double> xi, wi;
  for (int i = 0; i < radial_nodes; ++i) {
    const double r1 = x[i];
    const double g1 = 2.0 * p1 * std::log(r1 / r1g);
    // branch switch: 2 p2 log(sigma / r2g) = g1
    const double sigma = std::min(a2, r2g * std::pow(r1 / r1g, p1 / p2));
    // r2 < sigma: psi = g1 (constant in r2)
    VectorXd inner = c(-g1) * detail::radial_moments(w2, sigma, k2max, radial_nodes);
    // r2 > sigma: psi = g2(r2)
    if (sigma < a2) {
      gauss_legendre_ab(radial_nodes, sigma, a2, xi, wi);
      for (int q = 0; q < radial_nodes; ++q) {
        const double r2 = xi[q];
        const double g2 = 2.0 * p2 * std::log(r2 / r2g);
        const double base = w2(r2) * wi[q] * r2 * c(-g2);
        double accp = base, pw = r2 * r2;
        for (int k2 = 0; k2 <= k2max; ++k2) {
          inner(k2) += accp;
          accp *= pw;
        }
      }
    }
    double outer = w1(r1) * wq[i] * r1, pw1 = r1 * r1;
    for (int k1 = 0; k1 <= k1max; ++k1) {
      acc.row(k1) += outer * inner.transpose();
      outer *= pw1;
    }
  }
  for (int k1 = 0; k1 <= k1max; ++k1)
    for (int k2 = 0; k2 <= k2max; ++k2) {
      const std::size_t multi[2] = {static_cast<std::size_t>(k1),
                                    static_cast<std::size_t>(k2)};
      const std::size_t flat = basis.flatten(multi);
      const double s = f1.scale(k1) * f2.scale(k2);
      g(flat, flat) = kTwoPi * kTwoPi * s * s * acc(k1, k2);
    }
  return g;
}

}  // namespace saitoh
