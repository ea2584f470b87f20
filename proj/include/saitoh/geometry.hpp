#pragma once

// Planar factor domains (disks and annuli), product domains, and the
// quadrature rules everything else reduces to: equispaced-angle trapezoid
// rules on boundary circles and Gauss-Legendre x trapezoid tensor rules
// on the interior.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace saitoh {

using complexd = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Domains

enum class DomainKind { Disk, Annulus };

class Domain {
 public:
  static Domain disk(complexd center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
    Domain d;
    d.kind_ = DomainKind::Disk;
    d.center_ = center;
    d.r_outer_ = radius;
    return d;
  }

  static Domain annulus(complexd center, double r_inner, double r_outer) {
    if (!(0.0 < r_inner && r_inner < r_outer))
      throw std::invalid_argument("annulus requires 0 < r_inner < r_outer");
    Domain d;
    d.kind_ = DomainKind::Annulus;
    d.center_ = center;
    d.r_inner_ = r_inner;
    d.r_outer_ = r_outer;
    return d;
  }

  DomainKind kind() const { return kind_; }
  complexd center() const { return center_; }
  double radius() const {
    require(kind_ == DomainKind::Disk, "radius() is a disk property");
    return r_outer_;
  }
  double inner_radius() const {
    require(kind_ == DomainKind::Annulus, "inner_radius() is an annulus property");
    return r_inner_;
  }
  double outer_radius() const { return r_outer_; }

  bool is_disk() const { return kind_ == DomainKind::Disk; }
  bool is_annulus() const { return kind_ == DomainKind::Annulus; }

  int boundary_components() const { return is_disk() ? 1 : 2; }

  /// Characteristic length used for relative tolerances.
  double scale() const { return r_outer_; }

  bool contains(complexd z) const {
    const double r = std::abs(z - center_);
    if (is_disk()) return r < r_outer_;
    return r_inner_ < r && r < r_outer_;
  }

  /// Distance from an interior point to the boundary (negative outside).
  double boundary_distance(complexd z) const {
    const double r = std::abs(z - center_);
    if (is_disk()) return r_outer_ - r;
    return std::min(r - r_inner_, r_outer_ - r);
  }

  double area() const {
    if (is_disk()) return kPi * r_outer_ * r_outer_;
    return kPi * (r_outer_ * r_outer_ - r_inner_ * r_inner_);
  }

 private:
  static void require(bool ok, const char* msg) {
    if (!ok) throw std::logic_error(msg);
  }

  DomainKind kind_ = DomainKind::Disk;
  complexd center_{0.0, 0.0};
  double r_inner_ = 0.0;
  double r_outer_ = 1.0;
};

struct ProductDomain {
  std::vector<Domain> factors;
  std::vector<complexd> basepoint;  // one interior point per factor

  ProductDomain(std::vector<Domain> f, std::vector<complexd> z0)
      : factors(std::move(f)), basepoint(std::move(z0)) {
    if (factors.empty()) throw std::invalid_argument("product domain needs at least one factor");
    if (factors.size() != basepoint.size())
      throw std::invalid_argument("one basepoint per factor required");
    for (std::size_t j = 0; j < factors.size(); ++j) {
      if (!factors[j].contains(basepoint[j]))
        throw std::invalid_argument("basepoint " + std::to_string(j) +
                                    " is not strictly inside its factor");
    }
  }

  std::size_t dimension() const { return factors.size(); }
};

// ---------------------------------------------------------------------------
// Quadrature

struct BoundaryQuadrature {
  std::vector<complexd> nodes;
  std::vector<double> weights;          // arclength elements
  std::vector<complexd> outward_normals;  // unit, outward w.r.t. the domain
  int component_id = 0;
  complexd circle_center{0.0, 0.0};
  double circle_radius = 0.0;

  std::size_t size() const { return nodes.size(); }
};

/// Equispaced-angle trapezoid rule on one circle. `outward_sign = -1` flips
/// the normals (inner circle of an annulus). No node-count minimum; the
/// public boundary_quadrature() enforces the m >= 8 contract.
inline BoundaryQuadrature circle_rule(complexd center, double radius, int m,
                                      int component_id, int outward_sign = +1) {
  if (m < 1) throw std::invalid_argument("circle rule needs at least one node");
  BoundaryQuadrature q;
  q.component_id = component_id;
  q.circle_center = center;
  q.circle_radius = radius;
  q.nodes.reserve(m);
  q.weights.assign(m, radius * (kTwoPi / m));
  q.outward_normals.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double theta = kTwoPi * k / m;
    const complexd dir{std::cos(theta), std::sin(theta)};
    q.nodes.push_back(center + radius * dir);
    q.outward_normals.push_back(static_cast<double>(outward_sign) * dir);
  }
  return q;
}

/// One trapezoid rule per boundary circle; spectrally accurate for analytic
/// integrands. Component 0 is the outer circle.
inline std::vector<BoundaryQuadrature> boundary_quadrature(const Domain& d, int m) {
  if (m < 8) throw std::invalid_argument("boundary quadrature requires m >= 8");
  if (m % 2 != 0) throw std::invalid_argument("boundary quadrature requires even m");
  std::vector<BoundaryQuadrature> circles;
  circles.push_back(circle_rule(d.center(), d.outer_radius(), m, 0, +1));
  if (d.is_annulus()) circles.push_back(circle_rule(d.center(), d.inner_radius(), m, 1, -1));
  return circles;
}

struct AreaQuadrature {
  std::vector<complexd> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes/weights on [-1, 1], by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (t * p0 - p1) / (t * t - 1.0);
      const double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

/// Gauss-Legendre rule mapped to [a, b].
inline void gauss_legendre_ab(int n, double a, double b, std::vector<double>& x,
                              std::vector<double>& w) {
  gauss_legendre(n, x, w);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    x[i] = mid + half * x[i];
    w[i] *= half;
  }
}

/// Tensor rule: Gauss-Legendre in radius x trapezoid in angle, with the
/// radial Jacobian folded into the weights.
inline AreaQuadrature area_quadrature(const Domain& d, int m_r, int m_theta) {
  if (m_r < 4) throw std::invalid_argument("area quadrature requires m_r >= 4");
  if (m_theta < 8) throw std::invalid_argument("area quadrature requires m_theta >= 8");
  const double r0 = d.is_annulus() ? d.inner_radius() : 0.0;
  const double r1 = d.outer_radius();
  std::vector<double> rx, rw;
  gauss_legendre_ab(m_r, r0, r1, rx, rw);
  AreaQuadrature q;
  q.nodes.reserve(static_cast<std::size_t>(m_r) * m_theta);
  q.weights.reserve(static_cast<std::size_t>(m_r) * m_theta);
  const double dtheta = kTwoPi / m_theta;
  for (int i = 0; i < m_r; ++i) {
    for (int k = 0; k < m_theta; ++k) {
      const double theta = dtheta * k;
      q.nodes.push_back(d.center() + rx[i] * complexd{std::cos(theta), std::sin(theta)});
      q.weights.push_back(rw[i] * rx[i] * dtheta);
    }
  }
  return q;
}

// ---------------------------------------------------------------------------
// Sublevel geometry for psi = max_j 2 p_j G_j(., z_j)

/// Image of {|w| < rho} under w -> (w + alpha) / (1 + conj(alpha) w), the
/// inverse of the unit-disk Mobius map vanishing at alpha. Returns
/// center/radius of the image circle in unit-disk coordinates.
inline void mobius_sublevel_circle(complexd alpha, double rho, complexd& center,
                                   double& radius) {
  const double a2 = std::norm(alpha);
  const double denom = 1.0 - rho * rho * a2;
  center = alpha * (1.0 - rho * rho) / denom;
  radius = rho * (1.0 - a2) / denom;
}

/// Factor region {G_d(., z0) < -s} for a disk. Exact: the Green sublevel set
/// of a disk is again a disk (Mobius image of a centered circle).
inline Domain disk_green_sublevel(const Domain& d, complexd z0, double s) {
  if (!d.is_disk()) throw std::invalid_argument("disk_green_sublevel: disk factors only");
  if (!d.contains(z0)) throw std::invalid_argument("basepoint not inside factor");
  const double R = d.radius();
  const complexd alpha = (z0 - d.center()) / R;
  complexd c_unit;
  double r_unit;
  mobius_sublevel_circle(alpha, std::exp(-s), c_unit, r_unit);
  return Domain::disk(d.center() + R * c_unit, R * r_unit);
}

/// Product sublevel region {psi < -t} with psi = max_j 2 p_j G_j(., z0_j).
/// Annulus factors are only supported at t = 0 (identity); anything else is
/// rejected rather than approximated.
inline ProductDomain sublevel_region(const ProductDomain& p,
                                     const std::vector<double>& exponents, double t) {
  if (exponents.size() != p.dimension())
    throw std::invalid_argument("one exponent per factor required");
  for (double pj : exponents)
    if (!(pj > 0.0)) throw std::invalid_argument("exponents must be positive");
  if (t < 0.0) throw std::invalid_argument("sublevel parameter t must be nonnegative");
  if (t == 0.0) return p;
  std::vector<Domain> shrunk;
  shrunk.reserve(p.dimension());
  for (std::size_t j = 0; j < p.dimension(); ++j) {
    const Domain& d = p.factors[j];
    if (d.is_annulus())
      throw std::invalid_argument(
          "sublevel_region: annulus factors are supported only at t = 0");
    shrunk.push_back(disk_green_sublevel(d, p.basepoint[j], t / (2.0 * exponents[j])));
  }
  return ProductDomain(std::move(shrunk), p.basepoint);
}

}  // namespace saitoh
