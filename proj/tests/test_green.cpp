#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "saitoh/weights.hpp"
#include "support/annulus_images.hpp"

using namespace saitoh;
using Catch::Approx;

namespace {
const Domain kAnnulus = Domain::annulus({0, 0}, 0.5, 1.0);
}

TEST_CASE("disk Green values are the closed form") {
  const GreenSolution g0 = solve_green(Domain::disk({0, 0}, 1.0), {0, 0});
  CHECK(g0.value({0.5, 0.0}) == Approx(std::log(0.5)).epsilon(1e-14));

  const GreenSolution g = solve_green(Domain::disk({0, 0}, 1.0), {0.3, 0.0});
  CHECK(g.value({0.6, 0.0}) == Approx(std::log(0.3 / 0.82)).epsilon(1e-13));
}

TEST_CASE("pole too close to the boundary is rejected") {
  CHECK_THROWS_AS(solve_green(Domain::disk({0, 0}, 1.0), {1.0 - 1e-8, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("annulus Green matches the image-series oracle") {
  const GreenSolution g = solve_green(kAnnulus, {0.7, 0.0});
  // frozen oracle values (image series, independent implementation)
  CHECK(g.value({0.9, 0.0}) == Approx(-0.473688136676468).margin(1e-10));
  CHECK(g.value({0.6, 0.2}) == Approx(-0.411265242955501).margin(1e-10));
  CHECK(g.value({0.55, 0.0}) == Approx(-0.467735382088066).margin(1e-10));
  // full-curve comparison against the oracle evaluated here
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> rad(0.52, 0.98), ang(0.0, kTwoPi);
  for (int i = 0; i < 40; ++i) {
    const complexd z = std::polar(rad(rng), ang(rng));
    if (std::abs(z - complexd{0.7, 0.0}) < 0.02) continue;
    CHECK(g.value(z) ==
          Approx(testing::annulus_green(kAnnulus, z, {0.7, 0.0})).margin(1e-8));
  }
}

TEST_CASE("annulus Green boundary residual is small and reported") {
  for (double pole : {0.6, 0.7, 0.8}) {
    const GreenSolution g = solve_green(kAnnulus, {pole, 0.0});
    CHECK(g.boundary_residual() < 1e-10);
  }
}

TEST_CASE("boundary residual decays geometrically in the truncation") {
  double prev = 0.0;
  bool first = true;
  for (int k : {8, 16, 24, 32}) {
    const GreenSolution g = solve_green(kAnnulus, {0.7, 0.0}, k);
    const double res = g.boundary_residual();
    if (!first) CHECK(res < 0.9 * prev);
    prev = res;
    first = false;
  }
}

TEST_CASE("Green is negative inside and symmetric") {
  const GreenSolution g = solve_green(kAnnulus, {0.7, 0.0});
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> rad(0.52, 0.98), ang(0.0, kTwoPi);
  for (int i = 0; i < 30; ++i) {
    const complexd z = std::polar(rad(rng), ang(rng));
    if (std::abs(z - g.pole()) < 1e-2) continue;
    CHECK(g.value(z) < 0.0);
    const GreenSolution gz = solve_green(kAnnulus, z);
    CHECK(std::abs(g.value(z) - gz.value(g.pole())) < 1e-8);
  }
}

TEST_CASE("normal derivative on the unit circle is the Poisson kernel") {
  const GreenSolution g0 = solve_green(Domain::disk({0, 0}, 1.0), {0, 0});
  for (double th : {0.0, 1.0, 2.5}) {
    const complexd w = std::polar(1.0, th);
    CHECK(green_normal_derivative(g0, w) == Approx(1.0).epsilon(1e-13));
  }
  const complexd a{0.4, 0.2};
  const GreenSolution g = solve_green(Domain::disk({0, 0}, 1.0), a);
  for (double th : {0.3, 1.7, 4.4}) {
    const complexd w = std::polar(1.0, th);
    const double expected = (1.0 - std::norm(a)) / std::norm(w - a);
    CHECK(green_normal_derivative(g, w) == Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("boundary gradient is outward normal with |grad G| magnitude") {
  // dG/dv = |grad G| on the boundary: the gradient has no tangential
  // component and points out of the domain.
  const GreenSolution g = solve_green(kAnnulus, {0.7, 0.0});
  for (double th : {0.3, 2.0, 4.1}) {
    for (int comp = 0; comp < 2; ++comp) {
      const double r = comp == 0 ? 1.0 : 0.5;
      const complexd nu = std::polar(1.0, th) * (comp == 0 ? 1.0 : -1.0);
      const complexd w = std::polar(r, th);
      const complexd d = g.gradient(w);  // du/dx - i du/dy
      const double normal_part = (d * nu).real();
      const double tangential_part = (d * (nu * complexd{0, 1})).real();
      // absolute floor: the tangential leak scales with the boundary
      // residual of the series, not with |grad G|
      CHECK(std::abs(tangential_part) < 1e-7 + 1e-6 * std::abs(d));
      CHECK(normal_part == Approx(std::abs(d)).epsilon(1e-10));
      // independent one-sided difference along the inward direction
      const double h = 1e-4;
      const double fd = -(4.0 * g.value(w - h * nu) - g.value(w - 2.0 * h * nu)) / (2.0 * h);
      CHECK(green_normal_derivative(g, w) == Approx(fd).epsilon(1e-2));
      CHECK(green_normal_derivative(g, w) > 0.0);
    }
  }
  CHECK_THROWS_AS(green_normal_derivative(g, {0.75, 0.0}), std::invalid_argument);
}

TEST_CASE("total harmonic measure is one") {
  const auto total_flux = [](const Domain& d, complexd pole) {
    const GreenSolution g = solve_green(d, pole);
    double acc = 0.0;
    for (const BoundaryQuadrature& q : boundary_quadrature(d, 512))
      for (std::size_t i = 0; i < q.size(); ++i)
        acc += green_normal_derivative(g, q.nodes[i]) * q.weights[i];
    return acc / kTwoPi;
  };
  CHECK(total_flux(Domain::disk({0, 0}, 1.0), {0.4, 0.2}) == Approx(1.0).epsilon(1e-10));
  CHECK(total_flux(kAnnulus, {0.7, 0.0}) == Approx(1.0).epsilon(1e-8));
  CHECK(total_flux(Domain::annulus({0.2, -0.3}, 0.4, 1.3), {0.2, 0.5}) ==
        Approx(1.0).epsilon(1e-8));
}

TEST_CASE("log capacity closed forms and the annulus frozen value") {
  CHECK(log_capacity(Domain::disk({0, 0}, 1.0), {0, 0}) == Approx(1.0).epsilon(1e-13));
  const complexd a{0.35, -0.2};
  CHECK(log_capacity(Domain::disk({0, 0}, 1.0), a) ==
        Approx(1.0 / (1.0 - std::norm(a))).epsilon(1e-12));
  // scaling law: disk of radius R has capacity 1/R at the center
  CHECK(log_capacity(Domain::disk({1.0, 1.0}, 2.5), {1.0, 1.0}) ==
        Approx(1.0 / 2.5).epsilon(1e-12));
  CHECK(log_capacity(kAnnulus, {0.7, 0.0}) == Approx(3.240795992852946).margin(1e-9));
}

TEST_CASE("character periods of reference fields") {
  const ComplexGradient log_abs = [](complexd z) { return 1.0 / z; };
  CHECK(character_period(kAnnulus, log_abs).value == Approx(kTwoPi).epsilon(1e-12));
  const ComplexGradient re_z = [](complexd) { return complexd{1.0, 0.0}; };
  CHECK(character_period(kAnnulus, re_z).value == Approx(0.0).margin(1e-12));
}

TEST_CASE("Green character period is the inner harmonic measure, r-independent") {
  const GreenSolution g = solve_green(kAnnulus, {0.7, 0.0});
  const double omega = std::log(0.7) / std::log(0.5);
  const double base = std::abs(green_character_period(g).value);
  CHECK(base == Approx(kTwoPi * omega).epsilon(1e-8));
  for (double r : {0.55, 0.62, 0.68}) {
    const double p = std::abs(
        character_period(kAnnulus, [&](complexd z) { return g.gradient(z); }, 1, r)
            .value);
    CHECK(p == Approx(base).margin(1e-9));
  }
}

TEST_CASE("character equality is tested modulo two pi") {
  CHECK(characters_equal({kTwoPi, 1}, {0.0, 1}, 1e-9));
  CHECK_FALSE(characters_equal({kPi, 1}, {0.0, 1}, 1e-6));
  const double omega = std::log(0.7) / std::log(0.5);
  CHECK(characters_equal({omega * kTwoPi, 1}, {kTwoPi * omega, 1}, 1e-12));
  CHECK_THROWS_AS(characters_equal({0.0, 0}, {0.0, 1}, 1e-9), std::invalid_argument);
}

TEST_CASE("character period rejects disks") {
  const ComplexGradient f = [](complexd z) { return 1.0 / z; };
  CHECK_THROWS_AS(character_period(Domain::disk({0, 0}, 1.0), f), std::invalid_argument);
}

TEST_CASE("weight characters match the Green character at the tuned power") {
  // chi_{z0} = chi_{-phi/2} for phi = 2 s log|z| exactly when s is the
  // inner-circle harmonic measure, modulo 2 pi
  const GreenSolution g = solve_green(kAnnulus, {0.7, 0.0});
  const CharacterPeriod green_p = green_character_period(g);
  const double omega = std::abs(green_p.value) / kTwoPi;

  const auto weight_period = [&](double s) {
    const FactorWeight phi = FactorWeight::harmonic_log_power(s);
    return character_period(kAnnulus, [&](complexd z) {
      return -0.5 * phi.harmonic_gradient(z, kAnnulus);
    });
  };
  CHECK(characters_equal(green_p, weight_period(omega), 1e-8));
  CHECK(characters_equal(green_p, weight_period(omega + 1.0), 1e-8));  // mod 1 in s
  CHECK_FALSE(characters_equal(green_p, weight_period(omega + 0.25), 1e-6));

  // log-abs-poly weights: phi = 2 log|z| has the full character of log|z|
  const FactorWeight monomial_weight =
      FactorWeight::log_abs_poly({complexd{0, 0}, complexd{1, 0}}, {});
  const CharacterPeriod mono = character_period(kAnnulus, [&](complexd z) {
    return -0.5 * monomial_weight.harmonic_gradient(z, kAnnulus);
  });
  CHECK(mono.value == Approx(-kTwoPi).epsilon(1e-10));
  CHECK(characters_equal(mono, {0.0, 1}, 1e-9));  // trivial modulo 2 pi
}
