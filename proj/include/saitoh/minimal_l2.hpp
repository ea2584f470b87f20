#pragma once

// Minimal L2 integrals G(t) over sublevel sets {psi < -t}, the concavity /
// linearity diagnostics of G(h^{-1}(r)), and the flat-case closed form.

#include "saitoh/kernel.hpp"

namespace saitoh {

/// Setup for G(t): centered disk factors, exponents p_j, per-factor phi_j,
/// a jet ideal I with I(psi) contained in I, and the target germ h0.
struct MinL2Setup {
  ProductDomain domain;
  std::vector<double> exponents;
  std::vector<FactorWeight> phi;
  JetIdeal ideal;
  JetTarget h0;

  MinL2Setup(ProductDomain dom, std::vector<double> p, std::vector<FactorWeight> w,
             JetIdeal i, JetTarget target)
      : domain(std::move(dom)),
        exponents(std::move(p)),
        phi(std::move(w)),
        ideal(std::move(i)),
        h0(std::move(target)) {
    for (std::size_t j = 0; j < domain.dimension(); ++j) {
      if (!domain.factors[j].is_disk() ||
          std::abs(domain.basepoint[j] - domain.factors[j].center()) != 0.0)
        throw std::invalid_argument("minimal L2 setups use centered disk factors");
    }
    if (exponents.size() != domain.dimension() || phi.size() != domain.dimension())
      throw std::invalid_argument("exponent/weight arity mismatch");
    // I(psi) subset I: every multi-index outside I must satisfy the
    // multiplier criterion sum (alpha_j + 1) / p_j <= 1.
    for (const MultiIndex& alpha : ideal.constrained_multiindices()) {
      double s = 0.0;
      for (std::size_t j = 0; j < alpha.size(); ++j) s += (alpha[j] + 1.0) / exponents[j];
      if (s > 1.0 + 1e-12)
        throw std::invalid_argument("ideal does not contain I(psi)");
    }
    if (!h0.admissible_for(ideal))
      throw std::invalid_argument("target germ lies in the ideal");
  }
};

/// G(t): minimum of int_{psi < -t} |f|^2 prod e^{-phi_j} c(-psi) over the
/// truncated space subject to (f - h0, z0) in I.
inline double g_of_t(const MinL2Setup& s, const CWeight& c, double t, int degree,
                     const QuadratureSizes& q = {}) {
  if (t < 0.0) throw std::invalid_argument("g_of_t: t must be nonnegative");
  const QuadratureSizes eq = effective_sizes(q, degree);
  const ProductDomain region = sublevel_region(s.domain, s.exponents, t);
  const ProductBasis basis = standard_basis(s.domain, degree);
  const GreenBundle greens = GreenBundle::solve(s.domain);
  ProductWeight w{s.phi, s.exponents, c};
  const MatrixXcd gram = bergman_gram(basis, region, s.domain, greens, w, eq);
  MatrixXcd cons;
  VectorXcd d;
  detail::jet_constraints(basis, s.ideal, s.h0, cons, d);
  GramSolver solver(gram);
  const GramSolver::ConstrainedMin m = solver.constrained_min(cons, d);
  if (m.constraint_residual > 1e-8)
    throw std::domain_error("g_of_t: jet constraints numerically infeasible");
  return m.norm_squared;
}

/// Flat-case closed form
///   G(t) = (int_t^inf c e^{-l} dl) sum_{alpha in E} |d_alpha|^2 pi^n
///          e^{-phi(z0)} / (prod (alpha_j + 1) c_j(z_j)^{2 alpha_j + 2}),
/// E = {alpha : sum (alpha_j + 1)/p_j = 1}. The pi^n normalization is the
/// one that reproduces the quadrature oracle for Lebesgue measure on C^n.
inline double closed_form_G(const MinL2Setup& s, const CWeight& c, double t) {
  const std::size_t n = s.domain.dimension();
  for (const FactorWeight& w : s.phi)
    if (!w.is_harmonic())
      throw std::invalid_argument("closed_form_G needs harmonic weight presets");
  double phi_z0 = 0.0;
  std::vector<double> caps(n);
  for (std::size_t j = 0; j < n; ++j) {
    phi_z0 += s.phi[j].phi(s.domain.basepoint[j], s.domain.factors[j], s.domain.basepoint[j]);
    caps[j] = log_capacity(s.domain.factors[j], s.domain.basepoint[j]);
  }
  double sum = 0.0;
  for (const auto& [alpha, d] : s.h0.terms) {
    if (std::abs(d) == 0.0) continue;
    double crit = 0.0;
    for (std::size_t j = 0; j < n; ++j) crit += (alpha[j] + 1.0) / s.exponents[j];
    if (std::abs(crit - 1.0) > 1e-10)
      throw std::invalid_argument("closed_form_G: target must be supported on E");
    double denom = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      denom *= (alpha[j] + 1.0) * std::pow(caps[j], 2.0 * alpha[j] + 2.0);
    sum += std::norm(d) / denom;
  }
  return c.tail(t) * std::pow(kPi, static_cast<double>(n)) * std::exp(-phi_z0) * sum;
}

// ---------------------------------------------------------------------------
// Concavity of r -> G(h^{-1}(r))

struct ConcavityReport {
  std::vector<double> r;             // h(t_i)
  std::vector<double> g;             // G(t_i)
  std::vector<double> second_diffs;  // centered-scale second differences
  double max_violation = 0.0;        // largest positive second difference
  bool linear = false;
  double linear_slope = 0.0;         // fitted G / r slope when linear
  double linear_max_deviation = 0.0;
};

/// Default t grid: 9 points, geometric in e^{-t} from 1 to 0.1.
inline std::vector<double> default_t_grid(int points = 9, double emin = 0.1) {
  std::vector<double> t(points);
  for (int i = 0; i < points; ++i)
    t[i] = -std::log(std::pow(emin, static_cast<double>(i) / (points - 1)));
  return t;
}

/// Second-difference analysis of G(h^{-1}(r)) from samples (t_i, G_i).
/// Divided differences handle the nonuniform r grid; each one is rescaled
/// by the local step so violations are comparable with G itself.
inline ConcavityReport concavity_report(const std::vector<double>& t,
                                        const std::vector<double>& g, const CWeight& c,
                                        double linear_tol = 1e-6) {
  if (t.size() != g.size() || t.size() < 5)
    throw std::invalid_argument("concavity_report needs >= 5 grid points");
  ConcavityReport rep;
  rep.r.resize(t.size());
  rep.g = g;
  for (std::size_t i = 0; i < t.size(); ++i) rep.r[i] = c.tail(t[i]);
  const double scale = std::abs(g.front());
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double r0 = rep.r[i - 1], r1 = rep.r[i], r2 = rep.r[i + 1];
    const double dd = ((g[i + 1] - g[i]) / (r2 - r1) - (g[i] - g[i - 1]) / (r1 - r0)) /
                      (r2 - r0) * 2.0;
    const double local = dd * 0.25 * (r2 - r0) * (r2 - r0);
    rep.second_diffs.push_back(local);
  }
  double max_abs = 0.0;
  for (double v : rep.second_diffs) {
    rep.max_violation = std::max(rep.max_violation, v);
    max_abs = std::max(max_abs, std::abs(v));
  }
  rep.linear = max_abs < linear_tol * scale;
  // slope through the origin: G(h^{-1}(r)) = slope * r in the linear case
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    num += rep.r[i] * g[i];
    den += rep.r[i] * rep.r[i];
  }
  rep.linear_slope = num / den;
  for (std::size_t i = 0; i < t.size(); ++i)
    rep.linear_max_deviation =
        std::max(rep.linear_max_deviation,
                 std::abs(g[i] - rep.linear_slope * rep.r[i]) / scale);
  return rep;
}

}  // namespace saitoh
