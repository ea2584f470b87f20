#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "saitoh/kernel.hpp"

using namespace saitoh;
using Catch::Approx;

namespace {

const Domain kDisk = Domain::disk({0, 0}, 1.0);
const Domain kAnnulus = Domain::annulus({0, 0}, 0.5, 1.0);
const ProductDomain kUnitDisk({kDisk}, {complexd{0, 0}});
const ProductDomain kBidisc({kDisk, kDisk}, {complexd{0, 0}, complexd{0, 0}});
const ProductDomain kAnnulusAt07({kAnnulus}, {complexd{0.7, 0.0}});

ProductWeight unweighted(std::size_t n, std::vector<double> p) {
  return ProductWeight{std::vector<FactorWeight>(n, FactorWeight::zero()), std::move(p),
                       std::nullopt};
}

}  // namespace

TEST_CASE("multiplier and box ideal membership") {
  const JetIdeal mult = JetIdeal::multiplier({2.0, 2.0});
  CHECK_FALSE(ideal_contains(mult, {0, 0}));  // sum = 1 <= 1
  CHECK(ideal_contains(mult, {1, 0}));        // sum = 1.5
  const JetIdeal box = JetIdeal::box({1, 0});
  CHECK_FALSE(ideal_contains(box, {1, 0}));
  CHECK(ideal_contains(box, {2, 0}));
  // maximal ideal is the zero box
  const JetIdeal maximal = JetIdeal::maximal(2);
  CHECK_FALSE(ideal_contains(maximal, {0, 0}));
  CHECK(ideal_contains(maximal, {0, 1}));
}

TEST_CASE("multiplier ideal complement enumeration") {
  const JetIdeal mult = JetIdeal::multiplier({4.0, 4.0});
  const auto outside = mult.constrained_multiindices();
  CHECK(outside.size() == 6);  // alpha1 + alpha2 <= 2
  for (const MultiIndex& a : outside) CHECK(a[0] + a[1] <= 2);
}

TEST_CASE("disk Bergman kernel is 1/pi at every truncation") {
  for (int n : {0, 4, 8}) {
    const KernelReport r = bergman_kernel_at(kUnitDisk, unweighted(1, {1.0}), n);
    CHECK(r.value == Approx(1.0 / kPi).epsilon(1e-10));
  }
}

TEST_CASE("bidisc Bergman kernels with and without a profile") {
  const ProductWeight plain{{FactorWeight::zero(), FactorWeight::zero()},
                            {2.0, 2.0},
                            CWeight::constant()};
  CHECK(bergman_kernel_at(kBidisc, plain, 8).value ==
        Approx(1.0 / (kPi * kPi)).epsilon(1e-10));
  const double a = 0.8;
  const ProductWeight coupled{{FactorWeight::zero(), FactorWeight::zero()},
                              {2.0, 2.0},
                              CWeight::exponential(a)};
  CHECK(bergman_kernel_at(kBidisc, coupled, 8).value ==
        Approx((1.0 + a) / (kPi * kPi)).epsilon(1e-10));
}

TEST_CASE("first-jet Bergman minimum on the disk") {
  const KernelReport r = bergman_min_at(kUnitDisk, unweighted(1, {2.0}), JetIdeal::box({1}),
                                        JetTarget::monomial({1}), 8);
  CHECK(r.value == Approx(2.0 / kPi).epsilon(1e-10));
}

TEST_CASE("maximal-ideal minimum equals the kernel value") {
  const ProductWeight w{{FactorWeight::gaussian_bump(0.7)}, {1.0}, std::nullopt};
  const double kernel = bergman_kernel_at(kUnitDisk, w, 8).value;
  const double minimum = bergman_min_at(kUnitDisk, w, JetIdeal::maximal(1),
                                        JetTarget::one(1), 8)
                             .value;
  CHECK(kernel == Approx(minimum).epsilon(1e-12));
}

TEST_CASE("Bergman product law with mixed weights") {
  const std::vector<FactorWeight> phi{FactorWeight::zero(),
                                      FactorWeight::gaussian_bump(0.5)};
  const ProductWeight w{phi, {2.0, 2.0}, std::nullopt};
  const JetIdeal box = JetIdeal::box({1, 1});
  const JetTarget h0 = product_target({{complexd{0, 0}, complexd{1, 0}},
                                       {complexd{0, 0}, complexd{1, 0}}});
  const double lhs = bergman_min_at(kBidisc, w, box, h0, 10).value;
  double rhs = 1.0;
  for (std::size_t j = 0; j < 2; ++j) {
    const ProductWeight wj{{phi[j]}, {2.0}, std::nullopt};
    rhs *= bergman_min_at(kUnitDisk, wj, JetIdeal::box({1}), JetTarget::monomial({1}), 10)
               .value;
  }
  CHECK(lhs == Approx(rhs).epsilon(1e-8));
}

TEST_CASE("Szego kernels at the center") {
  const std::vector<BoundaryWeight> one{BoundaryWeight{false, 1.0, FactorWeight::zero()}};
  CHECK(hardy_S_kernel_at(kUnitDisk, one, 8).value == Approx(1.0).epsilon(1e-10));
  // conjugate-Hardy weight at the center is identical (Poisson kernel = 1)
  const std::vector<BoundaryWeight> conj{BoundaryWeight{}};
  CHECK(hardy_S_kernel_at(kUnitDisk, conj, 8).value == Approx(1.0).epsilon(1e-10));
  const std::vector<BoundaryWeight> conj2{BoundaryWeight{}, BoundaryWeight{}};
  CHECK(hardy_S_kernel_at(kBidisc, conj2, 8).value == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Hardy S product law") {
  const std::vector<FactorWeight> phi{FactorWeight::gaussian_bump(0.5),
                                      FactorWeight::zero()};
  const std::vector<BoundaryWeight> lambda{BoundaryWeight{true, 1.0, phi[0]},
                                           BoundaryWeight{true, 1.0, phi[1]}};
  const ProductDomain mixed({kDisk, kDisk}, {complexd{0.2, 0.1}, complexd{0, 0}});
  const double lhs = hardy_S_kernel_at(mixed, lambda, 10).value;
  double rhs = 1.0;
  for (std::size_t j = 0; j < 2; ++j) {
    const ProductDomain dj({mixed.factors[j]}, {mixed.basepoint[j]});
    rhs *= hardy_S_kernel_at(dj, {lambda[j]}, 10).value;
  }
  CHECK(lhs == Approx(rhs).epsilon(1e-8));
}

TEST_CASE("jet-constrained Hardy minimum on the disk") {
  const std::vector<BoundaryWeight> lambda1{
      BoundaryWeight{false, 1.0, FactorWeight::zero()}};
  const double v1 = hardy_S_min_at(kUnitDisk, lambda1, JetIdeal::box({1}),
                                   JetTarget::monomial({1}), 8)
                        .value;
  CHECK(v1 == Approx(1.0).epsilon(1e-10));
  // lambda = 1/2 (the k = 1 conjugate-Hardy scale): norms halve, value doubles
  const std::vector<BoundaryWeight> lambda_half{
      BoundaryWeight{false, 0.5, FactorWeight::zero()}};
  const double v2 = hardy_S_min_at(kUnitDisk, lambda_half, JetIdeal::box({1}),
                                   JetTarget::monomial({1}), 8)
                        .value;
  CHECK(v2 == Approx(2.0).epsilon(1e-10));
}

TEST_CASE("mixed-face Hardy kernel on the bidisc") {
  const std::vector<FactorWeight> phi{FactorWeight::zero(), FactorWeight::zero()};
  const KernelReport r = hardy_dM_kernel_at(kBidisc, {2.0, 2.0}, phi, 8);
  CHECK(r.value == Approx(1.0 / kPi).epsilon(1e-10));
}

TEST_CASE("jet-constrained face minimum on the bidisc") {
  const std::vector<FactorWeight> phi{FactorWeight::zero(), FactorWeight::zero()};
  // p = (4,4), box(1,1), h0 = w1 w2: the minimizer is w1 w2 itself, whose
  // face norm is 2 * (1/4) * 1 * (pi/2) = pi/4
  const JetTarget h0 = product_target(
      {{complexd{0, 0}, complexd{1, 0}}, {complexd{0, 0}, complexd{1, 0}}});
  const double v =
      hardy_dM_min_at(kBidisc, {4.0, 4.0}, phi, JetIdeal::box({1, 1}), h0, 8).value;
  CHECK(v == Approx(4.0 / kPi).epsilon(1e-10));
  // maximal ideal with h0 = 1 reduces to the plain kernel
  const double min_val =
      hardy_dM_min_at(kBidisc, {2.0, 2.0}, phi, JetIdeal::maximal(2), JetTarget::one(2), 8)
          .value;
  CHECK(min_val ==
        Approx(hardy_dM_kernel_at(kBidisc, {2.0, 2.0}, phi, 8).value).epsilon(1e-12));
}

TEST_CASE("maximal-ideal Hardy minimum equals the kernel value") {
  const std::vector<BoundaryWeight> lambda{
      BoundaryWeight{true, 1.0, FactorWeight::gaussian_bump(0.4)}};
  const ProductDomain dom({kDisk}, {complexd{0.3, -0.1}});
  const double kernel = hardy_S_kernel_at(dom, lambda, 8).value;
  const double minimum =
      hardy_S_min_at(dom, lambda, JetIdeal::maximal(1), JetTarget::one(1), 8).value;
  CHECK(kernel == Approx(minimum).epsilon(1e-12));
}

TEST_CASE("one-factor S and dM kernels differ by the exponent") {
  // K_{S,lambda} = (1/p) K_{dM,rho} when rho = (1/p) lambda
  const double p = 2.5;
  const std::vector<FactorWeight> phi{FactorWeight::gaussian_bump(0.4)};
  const ProductDomain dom({kDisk}, {complexd{0.3, -0.1}});
  const double k_s = hardy_S_kernel_at(dom, {BoundaryWeight{true, 1.0, phi[0]}}, 10).value;
  const double k_dm = hardy_dM_kernel_at(dom, {p}, phi, 10).value;
  CHECK(k_s == Approx(k_dm / p).epsilon(1e-10));
}

TEST_CASE("annulus kernels against frozen series values") {
  // frozen values are the infinite-series limits, so compare at a truncation
  // whose tail sits below the tolerance
  const double b = bergman_kernel_at(kAnnulusAt07, unweighted(1, {1.0}), 96).value;
  CHECK(b == Approx(3.343131916024288).epsilon(1e-9));
  // weight-1 Szego kernel over both circles
  const std::vector<BoundaryWeight> one{BoundaryWeight{false, 1.0, FactorWeight::zero()}};
  const double k = hardy_S_kernel_at(kAnnulusAt07, one, 96).value;
  CHECK(k == Approx(3.240787521447326).epsilon(1e-9));
}

TEST_CASE("conjugate Hardy kernel strictly dominates pi x Bergman on the annulus") {
  // converged gaps frozen from the independent image-series computation
  const struct {
    double z, khat, gap;
  } anchors[] = {{0.6, 26.3735030855822, 5.49652925e-05},
                 {0.7, 10.5028135181749, 5.48508114e-05},
                 {0.8, 11.1704665564225, 3.56304270e-05}};
  const std::vector<BoundaryWeight> conj{BoundaryWeight{}};
  for (const auto& a : anchors) {
    const ProductDomain dom({kAnnulus}, {complexd{a.z, 0.0}});
    const double khat = hardy_S_kernel_at(dom, conj, 96).value;
    const double pib = kPi * bergman_kernel_at(dom, unweighted(1, {1.0}), 96).value;
    CHECK(khat == Approx(a.khat).epsilon(1e-8));
    CHECK(khat - pib == Approx(a.gap).epsilon(1e-2));
    CHECK(khat > pib);
  }
}

TEST_CASE("kernel values are nondecreasing in the truncation") {
  const ProductWeight w{{FactorWeight::gaussian_bump(0.6)}, {1.0}, std::nullopt};
  std::vector<double> b_vals, k_vals, jet_vals;
  const std::vector<BoundaryWeight> conj{BoundaryWeight{}};
  for (int n : {4, 8, 12, 16}) {
    b_vals.push_back(bergman_kernel_at(kAnnulusAt07, w, n).value);
    k_vals.push_back(hardy_S_kernel_at(kAnnulusAt07, conj, n).value);
    jet_vals.push_back(bergman_min_at(kAnnulusAt07, w, JetIdeal::box({1}),
                                      JetTarget::monomial({1}), n)
                           .value);
  }
  for (std::size_t i = 1; i < b_vals.size(); ++i) {
    CHECK(b_vals[i] >= b_vals[i - 1] - 1e-10);
    CHECK(k_vals[i] >= k_vals[i - 1] - 1e-10);
    CHECK(jet_vals[i] >= jet_vals[i - 1] - 1e-10);
  }
}

TEST_CASE("one-dimensional equality with a coupled profile on the disk") {
  // Disk characters are trivial, so K_rho = (int c e^{-t}) pi B_rho~ holds
  // for any admissible c at any basepoint; this drives the pointwise
  // c(-2 p0 G) area weight with an off-center pole.
  const ProductDomain dom({kDisk}, {complexd{0.3, 0.0}});
  const std::vector<FactorWeight> phi{FactorWeight::zero()};

  SECTION("exponential profile (real-analytic weight)") {
    const CWeight c = CWeight::exponential(1.0);  // c(-2G) = |mobius|^2
    const double k = hardy_dM_kernel_at(dom, {1.0}, phi, 16).value;
    const ProductWeight w{phi, {1.0}, c};
    const double b = bergman_kernel_at(dom, w, 16).value;
    CHECK(k / (kPi * b) == Approx(c.integral()).epsilon(1e-7));
    CHECK(k == Approx(1.0 / ((1.0 - 0.09) * (1.0 - 0.09))).epsilon(1e-9));
  }

  SECTION("affine profile (log-singular weight at the pole)") {
    const CWeight c = CWeight::affine(0.5);
    const double k = hardy_dM_kernel_at(dom, {1.0}, phi, 16).value;
    QuadratureSizes q;
    q.radial = 96;
    q.angular = 256;
    const ProductWeight w{phi, {1.0}, c};
    const double b = bergman_kernel_at(dom, w, 16, q).value;
    // quadrature converges only algebraically into the log singularity
    CHECK(k / (kPi * b) == Approx(c.integral()).epsilon(5e-3));
  }
}

TEST_CASE("harmonic log-abs weights keep the face/Bergman equality on disks") {
  // phi = 2 log|g| + 2u with g zero-free on the closed disk is harmonic-type
  // and disk characters are trivial, so the face kernel equals pi times the
  // Bergman kernel exactly (sum 1/p = 1, c = 1).
  HarmonicSeries u;
  u.poly = {complexd{0, 0}, complexd{0.2, 0.0}};  // u = Re(0.2 w)
  const FactorWeight logabs =
      FactorWeight::log_abs_poly({complexd{1, 0}, complexd{0.3, 0.0}}, u);
  const std::vector<FactorWeight> phi{logabs, FactorWeight::zero()};
  const double k_dm = hardy_dM_kernel_at(kBidisc, {2.0, 2.0}, phi, 14).value;
  const ProductWeight w{phi, {2.0, 2.0}, CWeight::constant()};
  const double b = bergman_kernel_at(kBidisc, w, 14).value;
  CHECK(k_dm == Approx(kPi * b).epsilon(1e-8));
}

TEST_CASE("reproducing property on random coefficient vectors") {
  const FactorBasis basis(kAnnulus, {0.7, 0.0}, 8, BasisKind::LaurentAtCenter);
  const AreaQuadrature q = area_quadrature(kAnnulus, 32, 64);
  const MatrixXcd gram =
      gram_area(basis, q, [](complexd z) { return std::exp(-0.3 * std::norm(z)); });
  GramSolver solver(gram);
  const VectorXcd v = basis.eval_all({0.7, 0.0});
  const VectorXcd section = solver.kernel_section(v);
  std::mt19937 rng(2024);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    VectorXcd a(v.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = complexd{gauss(rng), gauss(rng)};
    // <f, k_z0> with the convention <f, g> = c^H G a
    const complexd inner = (section.adjoint() * gram * a)(0, 0);
    const complexd f_at_z0 = v.transpose() * a;
    CHECK(std::abs(inner - f_at_z0) < 1e-8 * std::max(1.0, std::abs(f_at_z0)));
  }
}

TEST_CASE("appendix identity for the reciprocal jet kernel") {
  // p = (4,4), L = {(1,0), (0,1)}, d = (1, 2): 1/K^{I(psi),h0} equals the
  // weighted sum of reciprocal monomial kernels.
  const JetIdeal ipsi = JetIdeal::multiplier({4.0, 4.0});
  JetTarget h0;
  h0.terms = {{{1, 0}, complexd{1, 0}}, {{0, 1}, complexd{2, 0}}};
  const std::vector<BoundaryWeight> lambda{
      BoundaryWeight{false, 1.0, FactorWeight::zero()},
      BoundaryWeight{false, 1.0, FactorWeight::zero()}};
  const double k_h0 = hardy_S_min_at(kBidisc, lambda, ipsi, h0, 8).value;
  double rhs = 0.0;
  for (const auto& [alpha, d] : h0.terms)
    rhs += std::norm(d) /
           hardy_S_min_at(kBidisc, lambda, ipsi, JetTarget::monomial(alpha), 8).value;
  CHECK(1.0 / k_h0 == Approx(rhs).epsilon(1e-10));
  CHECK(1.0 / k_h0 == Approx(5.0).epsilon(1e-9));  // lambda == 1 makes both sides 5
}

TEST_CASE("boundary collar integrals recover the face norm") {
  // (1/pi) lim (1/(1-r)) int_{psi >= log r} |f|^2 equals ||f||^2_{dM,rho}
  // for product weights; computed as int_M - int_{sublevel product}.
  const std::vector<double> p{2.0, 2.0};
  const std::vector<FactorWeight> phi{FactorWeight::zero(), FactorWeight::zero()};
  const GreenBundle greens = GreenBundle::solve(kBidisc);
  const ProductBasis basis = standard_basis(kBidisc, 2);
  const MatrixXcd face = gram_face_sum(basis, greens, p, phi, 256, 32, 64);
  const double r = 1.0 - 1e-4;
  const ProductDomain inner_region = sublevel_region(kBidisc, p, -std::log(r));

  const auto collar_integral = [&](std::size_t flat) {
    double full = 1.0, inner = 1.0;
    const auto multi = basis.unflatten(flat);
    for (std::size_t j = 0; j < 2; ++j) {
      const AreaQuadrature qf = area_quadrature(kBidisc.factors[j], 48, 64);
      const AreaQuadrature qi = area_quadrature(inner_region.factors[j], 48, 64);
      double af = 0.0, ai = 0.0;
      for (std::size_t x = 0; x < qf.size(); ++x)
        af += std::norm(basis.factor(j).eval(multi[j], qf.nodes[x])) * qf.weights[x];
      for (std::size_t x = 0; x < qi.size(); ++x)
        ai += std::norm(basis.factor(j).eval(multi[j], qi.nodes[x])) * qi.weights[x];
      full *= af;
      inner *= ai;
    }
    return full - inner;
  };

  for (std::size_t flat : {basis.flatten(std::vector<std::size_t>{0, 0}),
                           basis.flatten(std::vector<std::size_t>{1, 1})}) {
    const double limit = collar_integral(flat) / (kPi * (1.0 - r));
    CHECK(limit == Approx(face(flat, flat).real()).epsilon(2e-3));
  }
}

TEST_CASE("Cauchy recovery of interior values") {
  const auto circles = boundary_quadrature(kDisk, 256);
  const auto sample = [&](const std::function<complexd(complexd)>& f) {
    std::vector<std::vector<complexd>> s(circles.size());
    for (std::size_t c = 0; c < circles.size(); ++c)
      for (const complexd& w : circles[c].nodes) s[c].push_back(f(w));
    return s;
  };
  CHECK(std::abs(cauchy_extend(circles, sample([](complexd w) { return w; }), {0.3, 0.0})
                     .value -
                 complexd{0.3, 0.0}) < 1e-12);
  CHECK(std::abs(cauchy_extend(circles, sample([](complexd) { return complexd{1, 0}; }),
                               {0.1, -0.4})
                     .value -
                 complexd{1, 0}) < 1e-12);
  const CauchyValue sq =
      cauchy_extend(circles, sample([](complexd w) { return w * w; }), {0.0, 0.5});
  CHECK(std::abs(sq.value - complexd{-0.25, 0.0}) < 1e-12);
  CHECK_FALSE(sq.accuracy_warning);
  const CauchyValue near_edge =
      cauchy_extend(circles, sample([](complexd w) { return w; }), {0.9995, 0.0});
  CHECK(near_edge.accuracy_warning);

  // annulus: f = 1/z is holomorphic there; recovery needs both circles
  const auto ann_circles = boundary_quadrature(kAnnulus, 256);
  std::vector<std::vector<complexd>> s(ann_circles.size());
  for (std::size_t c = 0; c < ann_circles.size(); ++c)
    for (const complexd& w : ann_circles[c].nodes) s[c].push_back(1.0 / w);
  const CauchyValue inv = cauchy_extend(ann_circles, s, {0.7, 0.0});
  CHECK(std::abs(inv.value - complexd{1.0 / 0.7, 0.0}) < 1e-12);
}

TEST_CASE("degree cap on jet constraints is enforced") {
  CHECK_THROWS_AS(bergman_min_at(kUnitDisk, unweighted(1, {2.0}), JetIdeal::box({3}),
                                 JetTarget::monomial({3}), 4),
                  std::invalid_argument);
}

TEST_CASE("target inside the ideal is rejected") {
  CHECK_THROWS_AS(bergman_min_at(kUnitDisk, unweighted(1, {2.0}), JetIdeal::box({1}),
                                 JetTarget::monomial({2}), 8),
                  std::invalid_argument);
}
