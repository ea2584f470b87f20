#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "saitoh/geometry.hpp"

using namespace saitoh;
using Catch::Approx;

TEST_CASE("circle rule with four nodes hits the axis points") {
  const BoundaryQuadrature q = circle_rule({0, 0}, 1.0, 4, 0);
  REQUIRE(q.size() == 4);
  CHECK(std::abs(q.nodes[0] - complexd{1, 0}) < 1e-15);
  CHECK(std::abs(q.nodes[1] - complexd{0, 1}) < 1e-15);
  CHECK(std::abs(q.nodes[2] - complexd{-1, 0}) < 1e-15);
  CHECK(std::abs(q.nodes[3] - complexd{0, -1}) < 1e-15);
  for (double w : q.weights) CHECK(w == Approx(kPi / 2).epsilon(1e-14));
}

TEST_CASE("boundary weights sum to the circumference") {
  for (int m : {8, 64, 256}) {
    const auto circles = boundary_quadrature(Domain::disk({0.3, -0.1}, 1.0), m);
    REQUIRE(circles.size() == 1);
    double sum = 0.0;
    for (double w : circles[0].weights) sum += w;
    CHECK(sum == Approx(kTwoPi).epsilon(1e-13));
  }
  const auto circles = boundary_quadrature(Domain::annulus({0, 0}, 0.5, 1.0), 64);
  REQUIRE(circles.size() == 2);
  double sum = 0.0;
  for (const auto& c : circles)
    for (double w : c.weights) sum += w;
  CHECK(sum == Approx(kTwoPi * 1.5).epsilon(1e-12));
}

TEST_CASE("boundary quadrature rejects bad node counts") {
  CHECK_THROWS_AS(boundary_quadrature(Domain::disk({0, 0}, 1.0), 6), std::invalid_argument);
  CHECK_THROWS_AS(boundary_quadrature(Domain::disk({0, 0}, 1.0), 9), std::invalid_argument);
}

TEST_CASE("annulus normals point out of the domain") {
  const auto circles = boundary_quadrature(Domain::annulus({0, 0}, 0.5, 1.0), 16);
  // outer circle: normal parallel to the node direction; inner: opposite
  CHECK((circles[0].outward_normals[0] - circles[0].nodes[0]).real() == Approx(0.0).margin(1e-14));
  CHECK(std::abs(circles[1].outward_normals[0] + circles[1].nodes[0] / 0.5) < 1e-14);
}

TEST_CASE("boundary rule integrates powers exactly below the alias order") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> radius(0.3, 2.0);
  const int m = 32;
  for (int trial = 0; trial < 20; ++trial) {
    const double r = radius(rng);
    const BoundaryQuadrature q = circle_rule({0, 0}, r, m, 0);
    std::uniform_int_distribution<int> kdist(-(m / 2 - 1), m / 2 - 1);
    const int k = kdist(rng);
    complexd acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      acc += std::pow(q.nodes[i], k) * q.weights[i];
    const complexd expected = k == 0 ? complexd{kTwoPi * r, 0} : complexd{0, 0};
    CHECK(std::abs(acc - expected) < 1e-12 * std::max(1.0, std::pow(r, k) * r));
  }
}

TEST_CASE("area rule recovers areas") {
  const AreaQuadrature disk = area_quadrature(Domain::disk({0, 0}, 1.0), 16, 32);
  double sum = 0.0;
  for (double w : disk.weights) sum += w;
  CHECK(sum == Approx(kPi).epsilon(1e-13));

  const AreaQuadrature ann = area_quadrature(Domain::annulus({0, 0}, 0.5, 1.0), 16, 32);
  sum = 0.0;
  for (double w : ann.weights) sum += w;
  CHECK(sum == Approx(0.75 * kPi).epsilon(1e-13));
}

TEST_CASE("area rule integrates |z|^2 on the unit disk") {
  const AreaQuadrature q = area_quadrature(Domain::disk({0, 0}, 1.0), 16, 32);
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) acc += std::norm(q.nodes[i]) * q.weights[i];
  CHECK(acc == Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("area rule is exact for radial powers up to the rule order") {
  const int m_r = 12;
  const AreaQuadrature q = area_quadrature(Domain::disk({0, 0}, 1.0), m_r, 16);
  for (int k = 0; k <= m_r - 1; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      acc += std::pow(std::norm(q.nodes[i]), k) * q.weights[i];
    CHECK(acc == Approx(kPi / (k + 1)).epsilon(1e-10));
  }
}

TEST_CASE("gauss-legendre is exact to degree 2n-1") {
  std::vector<double> x, w;
  gauss_legendre_ab(7, 0.0, 1.0, x, w);
  for (int deg : {0, 5, 13}) {
    double acc = 0.0;
    for (int i = 0; i < 7; ++i) acc += w[i] * std::pow(x[i], deg);
    CHECK(acc == Approx(1.0 / (deg + 1)).epsilon(1e-13));
  }
}

TEST_CASE("sublevel region shrinks centered disks exactly") {
  const ProductDomain bidisc({Domain::disk({0, 0}, 1.0), Domain::disk({0, 0}, 1.0)},
                             {complexd{0, 0}, complexd{0, 0}});
  const ProductDomain sub = sublevel_region(bidisc, {2.0, 2.0}, 1.0);
  CHECK(sub.factors[0].radius() == Approx(std::exp(-0.25)).epsilon(1e-14));
  CHECK(sub.factors[1].radius() == Approx(std::exp(-0.25)).epsilon(1e-14));
}

TEST_CASE("sublevel region at t = 0 is the identity") {
  const ProductDomain p({Domain::disk({0.2, 0.1}, 0.8)}, {complexd{0.3, 0.1}});
  const ProductDomain same = sublevel_region(p, {3.0}, 0.0);
  CHECK(same.factors[0].radius() == p.factors[0].radius());
  CHECK(same.factors[0].center() == p.factors[0].center());
}

TEST_CASE("off-center sublevel disk is the exact Mobius image") {
  // {|phi_a(z)| < e^{-1}} for a = 0.3 on the unit disk; verify pointwise
  const Domain sub = disk_green_sublevel(Domain::disk({0, 0}, 1.0), {0.3, 0.0}, 1.0);
  const double rho = std::exp(-1.0);
  for (int k = 0; k < 16; ++k) {
    const double th = kTwoPi * k / 16;
    const complexd z = sub.center() + sub.radius() * complexd{std::cos(th), std::sin(th)};
    const complexd phi = (z - 0.3) / (1.0 - 0.3 * z);
    CHECK(std::abs(phi) == Approx(rho).epsilon(1e-12));
  }
}

TEST_CASE("sublevel regions are monotone in t") {
  const ProductDomain p({Domain::disk({0, 0}, 1.0)}, {complexd{0.25, -0.1}});
  double prev = 10.0;
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const ProductDomain sub = sublevel_region(p, {1.5}, t);
    CHECK(sub.factors[0].radius() < prev);
    prev = sub.factors[0].radius();
  }
}

TEST_CASE("unsupported sublevel configurations are rejected") {
  const ProductDomain ann({Domain::annulus({0, 0}, 0.5, 1.0)}, {complexd{0.7, 0.0}});
  CHECK_THROWS_AS(sublevel_region(ann, {2.0}, 0.5), std::invalid_argument);
  CHECK_NOTHROW(sublevel_region(ann, {2.0}, 0.0));
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(Domain::disk({0, 0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Domain::annulus({0, 0}, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ProductDomain({Domain::disk({0, 0}, 1.0)}, {complexd{2.0, 0.0}}),
                  std::invalid_argument);
}
