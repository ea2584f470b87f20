#pragma once

// Green functions on disks (closed form) and annuli (Laurent-harmonic modal
// matching), their gradients and boundary normal derivatives, logarithmic
// capacities, and harmonic-conjugate periods around the annulus generator.

#include <algorithm>
#include <functional>
#include <optional>

#include "saitoh/geometry.hpp"

namespace saitoh {

/// G(z, z0) = log|z - z0| + h(z) with h harmonic and G = 0 on the boundary.
/// For a disk h is closed form; for an annulus h is a truncated
/// Laurent-harmonic series matched against -log|z - z0| mode by mode on both
/// circles (the Fourier coefficients of the data are known analytically, so
/// each mode is a 2x2 solve).
class GreenSolution {
 public:
  const Domain& domain() const { return domain_; }
  complexd pole() const { return pole_; }
  int correction_terms() const { return k_corr_; }
  double boundary_residual() const { return boundary_residual_; }

  /// G(z, pole).
  double value(complexd z) const { return std::log(std::abs(z - pole_)) + correction(z); }

  /// Harmonic part h(z) = G(z) - log|z - pole|.
  double correction(complexd z) const {
    if (domain_.is_disk()) {
      const double R = domain_.radius();
      const complexd alpha = (pole_ - domain_.center()) / R;
      const complexd zeta = (z - domain_.center()) / R;
      return -std::log(R) - std::log(std::abs(1.0 - std::conj(alpha) * zeta));
    }
    const complexd zeta = z - domain_.center();
    double h = coeff_a0_ + coeff_b0_ * std::log(std::abs(zeta));
    complexd zp = 1.0;   // zeta^k
    complexd zm = 1.0;   // zeta^{-k}
    const complexd inv = 1.0 / zeta;
    for (int k = 1; k <= k_corr_; ++k) {
      zp *= zeta;
      zm *= inv;
      h += (coeff_p_[k - 1] * zp + coeff_q_[k - 1] * zm).real();
    }
    return h;
  }

  /// Complex gradient D = dG/dx - i dG/dy = 2 dG/dz; |D| = |grad G|.
  complexd gradient(complexd z) const {
    complexd d = 1.0 / (z - pole_);
    if (domain_.is_disk()) {
      const double R = domain_.radius();
      const complexd alpha = (pole_ - domain_.center()) / R;
      const complexd zeta = (z - domain_.center()) / R;
      // 2 d/dz of -log|1 - conj(alpha) zeta|
      d += (std::conj(alpha) / R) / (1.0 - std::conj(alpha) * zeta);
      return d;
    }
    const complexd zeta = z - domain_.center();
    d += coeff_b0_ / zeta;
    complexd zp = 1.0;  // zeta^{k-1}
    complexd zm = 1.0 / (zeta * zeta);  // zeta^{-k-1}
    const complexd inv = 1.0 / zeta;
    for (int k = 1; k <= k_corr_; ++k) {
      d += static_cast<double>(k) * (coeff_p_[k - 1] * zp - coeff_q_[k - 1] * zm);
      zp *= zeta;
      zm *= inv;
    }
    return d;
  }

  friend GreenSolution solve_green(const Domain& d, complexd z0, int k_corr);

 private:
  Domain domain_ = Domain::disk({0, 0}, 1.0);
  complexd pole_{0, 0};
  int k_corr_ = 0;
  double coeff_a0_ = 0.0;
  double coeff_b0_ = 0.0;
  std::vector<complexd> coeff_p_;  // coefficients of zeta^k inside Re[.]
  std::vector<complexd> coeff_q_;  // coefficients of zeta^{-k} inside Re[.]
  double boundary_residual_ = 0.0;
};

namespace detail {

inline double green_boundary_residual(const GreenSolution& g) {
  const Domain& d = g.domain();
  double worst = 0.0;
  const int m = 720;
  for (int comp = 0; comp < d.boundary_components(); ++comp) {
    const double r = comp == 0 ? d.outer_radius() : d.inner_radius();
    for (int k = 0; k < m; ++k) {
      const double th = kTwoPi * (k + 0.41) / m;
      const complexd z = d.center() + r * complexd{std::cos(th), std::sin(th)};
      worst = std::max(worst, std::abs(g.value(z)));
    }
  }
  return worst;
}

}  // namespace detail

/// Solve the Green function with pole z0. `k_corr = 0` selects the default
/// (64 modes, doubled until the boundary residual drops below 1e-10, cap 512).
inline GreenSolution solve_green(const Domain& d, complexd z0, int k_corr = 0) {
  if (!d.contains(z0)) throw std::invalid_argument("solve_green: pole must be interior");
  if (d.boundary_distance(z0) < 1e-6 * d.scale())
    throw std::invalid_argument("solve_green: pole too close to the boundary");

  GreenSolution g;
  g.domain_ = d;
  g.pole_ = z0;
  if (d.is_disk()) {
    g.boundary_residual_ = 0.0;
    return g;
  }

  const complexd p = z0 - d.center();
  const double s = std::abs(p);
  const double R = d.outer_radius();
  const double r = d.inner_radius();

  const bool auto_mode = (k_corr <= 0);
  int K = auto_mode ? 64 : k_corr;
  for (;;) {
    g.k_corr_ = K;
    g.coeff_p_.assign(K, 0.0);
    g.coeff_q_.assign(K, 0.0);
    // mode 0:  a0 + b0 log R = -log R,  a0 + b0 log r = -log s
    g.coeff_b0_ = (-std::log(s) + std::log(R)) / (std::log(r) - std::log(R));
    g.coeff_a0_ = -std::log(R) - g.coeff_b0_ * std::log(R);
    // mode k >= 1: match the e^{ik theta} Fourier coefficient of -log|w - z0|
    // on both circles.  X = P_k, Y = conj(Q_k):
    //   X R^k + Y R^-k = (1/k) (conj(p)/R)^k        (outer, R > s)
    //   X r^k + Y r^-k = (1/k) (r/p)^k              (inner, r < s)
    complexd cpR = 1.0, rp = 1.0;
    double Rk = 1.0, rk = 1.0;
    const complexd cp_over_R = std::conj(p) / R;
    const complexd r_over_p = r / p;
    for (int k = 1; k <= K; ++k) {
      cpR *= cp_over_R;
      rp *= r_over_p;
      Rk *= R;
      rk *= r;
      const complexd rhs_out = cpR / static_cast<double>(k);
      const complexd rhs_in = rp / static_cast<double>(k);
      const double det = Rk / rk - rk / Rk;
      const complexd x = (rhs_out / rk - rhs_in / Rk) / det;
      const complexd y = (rhs_in * Rk - rhs_out * rk) / det;
      g.coeff_p_[k - 1] = x;
      g.coeff_q_[k - 1] = std::conj(y);
    }
    g.boundary_residual_ = detail::green_boundary_residual(g);
    if (!auto_mode || g.boundary_residual_ < 1e-10 || K >= 512) break;
    K *= 2;
  }
  return g;
}

/// dG/dv at a boundary point: equals |grad G| there, strictly positive on
/// analytic boundaries.
inline double green_normal_derivative(const GreenSolution& g, complexd w) {
  const Domain& d = g.domain();
  const double r = std::abs(w - d.center());
  const bool on_outer = std::abs(r - d.outer_radius()) < 1e-6 * d.scale();
  const bool on_inner =
      d.is_annulus() && std::abs(r - d.inner_radius()) < 1e-6 * d.scale();
  if (!on_outer && !on_inner)
    throw std::invalid_argument("green_normal_derivative: point is not on the boundary");
  return std::abs(g.gradient(w));
}

/// Logarithmic capacity c(z0) = exp(h(z0)), h the harmonic part of G.
inline double log_capacity(const Domain& d, complexd z0) {
  const GreenSolution g = solve_green(d, z0);
  return std::exp(g.correction(z0));
}

// ---------------------------------------------------------------------------
// Characters as periods of conjugate differentials

/// Period of *du around a boundary generator, stored as a real number;
/// character equality is tested modulo 2 pi.
struct CharacterPeriod {
  double value = 0.0;
  int generator = 1;  // boundary circle id; 1 = inner circle of the annulus
};

/// A harmonic function handle: its complex gradient D(z) = du/dx - i du/dy,
/// which is holomorphic wherever u is harmonic.
using ComplexGradient = std::function<complexd(complexd)>;

/// Period of *du around the circle |z - c| = radius, traversed
/// counterclockwise: the flux of grad u through the circle with the
/// away-from-center normal.
inline CharacterPeriod character_period(const Domain& d, const ComplexGradient& grad_u,
                                        int generator = 1,
                                        std::optional<double> radius = std::nullopt,
                                        int nodes = 1024) {
  if (!d.is_annulus())
    throw std::invalid_argument("character_period: disk characters are trivial");
  if (generator != 0 && generator != 1)
    throw std::invalid_argument("character_period: unknown generator id");
  const double r = radius.value_or(std::sqrt(d.inner_radius() * d.outer_radius()));
  if (!(d.inner_radius() < r && r < d.outer_radius()))
    throw std::invalid_argument("character_period: radius must lie strictly inside");
  double period = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double th = kTwoPi * k / nodes;
    const complexd nu{std::cos(th), std::sin(th)};
    const complexd z = d.center() + r * nu;
    period += (grad_u(z) * nu).real() * r * (kTwoPi / nodes);
  }
  return CharacterPeriod{period, generator};
}

/// Period of *dG around the inner-circle generator, with the contour chosen
/// between the inner circle and the pole radius so the loop represents the
/// annulus generator and not a loop around the pole. Magnitude equals
/// 2 pi x (harmonic measure of the inner circle at the pole).
inline CharacterPeriod green_character_period(const GreenSolution& g, int nodes = 1024) {
  const Domain& d = g.domain();
  if (!d.is_annulus())
    throw std::invalid_argument("green_character_period: annulus only");
  const double s = std::abs(g.pole() - d.center());
  const double r = std::sqrt(d.inner_radius() * s);
  return character_period(
      d, [&g](complexd z) { return g.gradient(z); }, 1, r, nodes);
}

/// True iff the two periods agree modulo 2 pi (distance on the circle).
inline bool characters_equal(const CharacterPeriod& a, const CharacterPeriod& b,
                             double tol) {
  if (a.generator != b.generator)
    throw std::invalid_argument("characters_equal: periods on different generators");
  return std::abs(std::remainder(a.value - b.value, kTwoPi)) <= tol;
}

}  // namespace saitoh
