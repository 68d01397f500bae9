#include <cstdio>
#include <vector>

#include "macrocap/linalg.hpp"
#include "macrocap/poly.hpp"
#include "macrocap/rng.hpp"

using namespace macrocap;

int main() {
  // --- QR on a known factored polynomial: (t+1)(t+2)(t+3) ---
  // c = 6 + 11 t + 6 t^2 + t^3
  {
    const auto w = poly_roots_neg({{6.0, 11.0, 6.0, 1.0}});
    std::printf("cubic roots (want 1,2,3): ");
    for (const auto& z : w) std::printf("(%g,%g) ", z.real(), z.imag());
    std::printf("\n");
  }
  {
    // (t+1)(t+2)(t+3)(t+4): 24 + 50t + 35t^2 + 10t^3 + t^4
    const auto w = poly_roots_neg({{24.0, 50.0, 35.0, 10.0, 1.0}});
    std::printf("quartic roots (want 1..4): ");
    for (const auto& z : w) std::printf("(%g,%g) ", z.real(), z.imag());
    std::printf("\n");
  }

  // --- Jacobi: 3x3 Hermitian, check one reconstruction ---
  {
    const std::uint64_t key = rng::derive_key(1, 2);
    ComplexMatrix b(3, 3);
    std::uint64_t ctr = 0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        const auto g = rng::normal_pair(key, ctr++);
        b(r, c) = cplx(g.g0, g.g1);
      }
    ComplexMatrix a = matmul(b, adjoint(b));
    const EigResult e = hermitian_eig(a);
    std::printf("eigs: %g %g %g\n", e.values[0], e.values[1], e.values[2]);

    // unitarity
    const ComplexMatrix vhv = matmul(adjoint(e.vectors), e.vectors);
    double uoff = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        uoff += std::norm(vhv(r, c) - (r == c ? cplx(1, 0) : cplx(0, 0)));
    std::printf("unitarity off = %.3e\n", std::sqrt(uoff));

    // A v_j - lambda_j v_j residual per eigenpair
    for (int j = 0; j < 3; ++j) {
      double res = 0.0;
      for (int r = 0; r < 3; ++r) {
        cplx av(0, 0);
        for (int c = 0; c < 3; ++c) av += a(r, c) * e.vectors(c, j);
        res += std::norm(av - e.values[j] * e.vectors(r, j));
      }
      std::printf("pair %d residual = %.3e\n", j, std::sqrt(res));
    }
  }
  return 0;
}
