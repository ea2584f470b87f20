// Prints the conjugate Hardy kernel, pi x Bergman kernel, and their gap on
// an annulus, across a few truncation degrees.

#include <cstdio>

#include "saitoh/kernel.hpp"

int main() {
  using namespace saitoh;
  const ProductDomain dom({Domain::annulus({0, 0}, 0.5, 1.0)}, {complexd{0.7, 0.0}});
  const std::vector<BoundaryWeight> conj_hardy{BoundaryWeight{}};
  const ProductWeight unweighted{{FactorWeight::zero()}, {1.0}, std::nullopt};
  std::printf("%4s %18s %18s %14s\n", "N", "Khat", "pi*B", "gap");
  for (int n : {16, 32, 64, 96, 128}) {
    const double k = hardy_S_kernel_at(dom, conj_hardy, n).value;
    const double b = kPi * bergman_kernel_at(dom, unweighted, n).value;
    std::printf("%4d %18.12f %18.12f %14.6e\n", n, k, b, k - b);
  }
  return 0;
}
