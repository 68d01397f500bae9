#include <cstdio>
#include <vector>

#include "macrocap/poly.hpp"
#include "macrocap/rng.hpp"

using namespace macrocap;

int main() {
  const std::uint64_t key = rng::derive_key(7, 77);
  std::uint64_t ctr = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng::uniform(key, ctr++) * 7);
    PolyRealCoeffs p;
    p.c.resize(d + 1);
    for (int l = 0; l <= d; ++l)
      p.c[l] = std::pow(10.0, -2.0 + 4.0 * rng::uniform(key, ctr++));
    const auto omega = poly_roots_neg(p);

    std::vector<cplx> coef{1.0};
    for (const auto& w : omega) {
      std::vector<cplx> next(coef.size() + 1, cplx(0, 0));
      for (std::size_t i = 0; i < coef.size(); ++i) {
        next[i + 1] += coef[i];
        next[i] += coef[i] * w;
      }
      coef = next;
    }
    double worst = 0.0;
    for (int l = 0; l <= d; ++l) {
      const double want = p.c[l] / p.c[d];
      worst = std::max(worst, std::abs(coef[l] - want) / std::max(1.0, std::abs(want)));
    }
    std::printf("trial %2d d=%d worst=%.3e %s\n", trial, d, worst,
                worst < 1e-10 ? "" : "<<< BAD");
    if (worst > 1e-10) {
      std::printf("  coeffs:");
      for (int l = 0; l <= d; ++l) std::printf(" %.4g", p.c[l]);
      std::printf("\n  omega:");
      for (const auto& w : omega) std::printf(" (%.6g,%.6g)", w.real(), w.imag());
      std::printf("\n");
    }
  }
  return 0;
}
