#pragma once

// Per-factor weight presets e^{-phi_j}, the class-P0 profile c(t), and the
// plurisubharmonic exhaustion psi = max_j 2 p_j G_j(., z_j).

#include <optional>
#include <span>

#include "saitoh/green.hpp"

namespace saitoh {

// ---------------------------------------------------------------------------
// c(t): positive on [0, inf), c(0) = 1, c(t) e^{-t} nonincreasing, with a
// finite tail integral in closed form.

class CWeight {
 public:
  enum class Kind { Constant, Exponential, Affine };

  static CWeight constant() { return CWeight(Kind::Constant, 0.0); }
  static CWeight exponential(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("CWeight::exponential needs a > 0");
    return CWeight(Kind::Exponential, a);
  }
  static CWeight affine(double b) {
    if (!(b > 0.0 && b <= 1.0))
      throw std::invalid_argument("CWeight::affine needs b in (0, 1]");
    return CWeight(Kind::Affine, b);
  }

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  bool is_constant() const { return kind_ == Kind::Constant; }

  double operator()(double t) const {
    switch (kind_) {
      case Kind::Constant: return 1.0;
      case Kind::Exponential: return std::exp(-param_ * t);
      case Kind::Affine: return 1.0 + param_ * t;
    }
    return 1.0;
  }

  /// h(t) = int_t^inf c(l) e^{-l} dl, in closed form.
  double tail(double t) const {
    switch (kind_) {
      case Kind::Constant: return std::exp(-t);
      case Kind::Exponential: return std::exp(-(1.0 + param_) * t) / (1.0 + param_);
      case Kind::Affine: return std::exp(-t) * (1.0 + param_ + param_ * t);
    }
    return 0.0;
  }

  /// int_0^inf c(t) e^{-t} dt.
  double integral() const { return tail(0.0); }

 private:
  CWeight(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

/// c_tail operation from the minimal-L2 machinery (closed-form tail).
inline double c_tail(const CWeight& c, double t) {
  if (t < 0.0) throw std::invalid_argument("c_tail: t must be nonnegative");
  return c.tail(t);
}

// ---------------------------------------------------------------------------
// Factor weights phi_j

/// Finite harmonic description  u(z) = k log|z - c| + Re(poly(z - c)).
struct HarmonicSeries {
  double log_coeff = 0.0;
  std::vector<complexd> poly;  // coefficients of (z - c)^m, m = 0, 1, ...

  double value(complexd zeta) const {
    double u = log_coeff == 0.0 ? 0.0 : log_coeff * std::log(std::abs(zeta));
    complexd acc = 0.0, zp = 1.0;
    for (const complexd& cm : poly) {
      acc += cm * zp;
      zp *= zeta;
    }
    return u + acc.real();
  }

  /// 2 du/dz.
  complexd gradient(complexd zeta) const {
    complexd d = log_coeff == 0.0 ? complexd{0, 0} : complexd{log_coeff, 0} / zeta;
    complexd zp = 1.0;
    for (std::size_t m = 1; m < poly.size(); ++m) {
      d += static_cast<double>(m) * poly[m] * zp;
      zp *= zeta;
    }
    return d;
  }
};

class FactorWeight {
 public:
  enum class Preset { Zero, HarmonicLogPower, LogAbsPoly, GaussianBump };

  static FactorWeight zero() { return FactorWeight(Preset::Zero); }

  /// phi = 2 s log|z - center| (annulus factors only).
  static FactorWeight harmonic_log_power(double s) {
    FactorWeight w(Preset::HarmonicLogPower);
    w.s_ = s;
    return w;
  }

  /// phi = 2 log|g(z)| + 2 u(z), g a polynomial in (z - center).
  static FactorWeight log_abs_poly(std::vector<complexd> g, HarmonicSeries u) {
    if (g.empty()) throw std::invalid_argument("log_abs_poly: empty polynomial");
    FactorWeight w(Preset::LogAbsPoly);
    w.g_ = std::move(g);
    w.u_ = std::move(u);
    return w;
  }

  /// phi = a |z - z0|^2, subharmonic and non-harmonic.
  static FactorWeight gaussian_bump(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("gaussian_bump needs a > 0");
    FactorWeight w(Preset::GaussianBump);
    w.a_ = a;
    return w;
  }

  Preset preset() const { return preset_; }
  double log_power() const { return s_; }
  double bump_amplitude() const { return a_; }

  double phi(complexd z, const Domain& dom, complexd basepoint) const {
    switch (preset_) {
      case Preset::Zero:
        return 0.0;
      case Preset::HarmonicLogPower: {
        if (!dom.is_annulus())
          throw std::invalid_argument("harmonic_log_power is an annulus weight");
        return 2.0 * s_ * std::log(std::abs(z - dom.center()));
      }
      case Preset::LogAbsPoly: {
        const complexd zeta = z - dom.center();
        complexd g = 0.0, zp = 1.0;
        for (const complexd& cm : g_) {
          g += cm * zp;
          zp *= zeta;
        }
        return 2.0 * std::log(std::abs(g)) + 2.0 * u_.value(zeta);
      }
      case Preset::GaussianBump:
        return a_ * std::norm(z - basepoint);
    }
    return 0.0;
  }

  double weight(complexd z, const Domain& dom, complexd basepoint) const {
    const double v = std::exp(-phi(z, dom, basepoint));
    if (!std::isfinite(v) || !(v > 0.0))
      throw std::domain_error("factor weight is not finite and positive at a node");
    return v;
  }

  /// Radial about the factor center (so rotation-invariant Grams apply).
  bool is_radial(const Domain& dom, complexd basepoint) const {
    switch (preset_) {
      case Preset::Zero: return true;
      case Preset::HarmonicLogPower: return true;
      case Preset::GaussianBump: return std::abs(basepoint - dom.center()) == 0.0;
      case Preset::LogAbsPoly: return false;
    }
    return false;
  }

  bool is_harmonic() const {
    return preset_ == Preset::Zero || preset_ == Preset::HarmonicLogPower ||
           preset_ == Preset::LogAbsPoly;
  }

  /// Lelong number of phi at z0 (2 x vanishing order of g for log-type
  /// weights, 0 otherwise).
  double lelong(complexd z0, const Domain& dom) const {
    if (preset_ != Preset::LogAbsPoly) return 0.0;
    // order of g at z0 via derivative coefficients of the shifted polynomial
    const complexd zeta0 = z0 - dom.center();
    std::vector<complexd> shifted(g_.size(), 0.0);
    // Taylor shift by synthetic division
    std::vector<complexd> work = g_;
    for (std::size_t m = 0; m < g_.size(); ++m) {
      for (std::size_t i = g_.size() - 1; i > m; --i) work[i - 1] += work[i] * zeta0;
      shifted[m] = work[m];
    }
    for (std::size_t m = 0; m < shifted.size(); ++m)
      if (std::abs(shifted[m]) > 1e-14) return 2.0 * static_cast<double>(m);
    return 2.0 * static_cast<double>(g_.size());
  }

  /// 2 d(phi)/dz where phi is harmonic (log-power and log-abs-poly presets).
  complexd harmonic_gradient(complexd z, const Domain& dom) const {
    switch (preset_) {
      case Preset::Zero:
        return {0.0, 0.0};
      case Preset::HarmonicLogPower:
        return 2.0 * s_ / (z - dom.center());
      case Preset::LogAbsPoly: {
        const complexd zeta = z - dom.center();
        complexd g = 0.0, dg = 0.0, zp = 1.0;
        for (std::size_t m = 0; m < g_.size(); ++m) {
          g += g_[m] * zp;
          if (m + 1 < g_.size())
            dg += static_cast<double>(m + 1) * g_[m + 1] * zp;
          zp *= zeta;
        }
        return 2.0 * dg / g + 2.0 * u_.gradient(zeta);
      }
      case Preset::GaussianBump:
        throw std::invalid_argument("gaussian bump weight is not harmonic");
    }
    return {0.0, 0.0};
  }

 private:
  explicit FactorWeight(Preset p) : preset_(p) {}
  Preset preset_;
  double s_ = 0.0;
  double a_ = 0.0;
  std::vector<complexd> g_;
  HarmonicSeries u_;
};

// ---------------------------------------------------------------------------
// psi and the assembled product weight

/// Green data for every factor of a product domain (poles at the basepoint).
struct GreenBundle {
  std::vector<GreenSolution> greens;

  static GreenBundle solve(const ProductDomain& p) {
    GreenBundle b;
    b.greens.reserve(p.dimension());
    for (std::size_t j = 0; j < p.dimension(); ++j)
      b.greens.push_back(solve_green(p.factors[j], p.basepoint[j]));
    return b;
  }
};

/// psi(w) = max_j 2 p_j G_j(w_j, z_j); the max is exact, no smoothing.
inline double psi_value(const GreenBundle& greens, const std::vector<double>& p,
                        std::span<const complexd> w) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.size(); ++j)
    m = std::max(m, 2.0 * p[j] * greens.greens[j].value(w[j]));
  return m;
}

/// Weight data for the Bergman-side integrals: rho~ = c(-psi) prod e^{-phi_j}.
struct ProductWeight {
  std::vector<FactorWeight> phi;
  std::vector<double> exponents;          // p_j defining psi
  std::optional<CWeight> c;               // absent or constant: separable

  bool coupled() const { return c.has_value() && !c->is_constant(); }
};

}  // namespace saitoh
