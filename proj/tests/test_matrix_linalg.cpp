// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "macrocap/linalg.hpp"
#include "macrocap/matrix.hpp"
#include "macrocap/poly.hpp"
#include "macrocap/rng.hpp"
#include "oracles.hpp"

using namespace macrocap;
using Catch::Approx;

namespace {

ComplexMatrix random_hermitian_psd(int n, std::uint64_t seed) {
  // B B^H + small ridge.
  const std::uint64_t key = rng::derive_key(seed, 11);
  ComplexMatrix b(n, n);
  std::uint64_t ctr = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const auto g = rng::normal_pair(key, ctr++);
      b(r, c) = cplx(g.g0, g.g1);
    }
  ComplexMatrix a = matmul(b, adjoint(b));
  for (int i = 0; i < n; ++i) a(i, i) += 1e-3;
  return a;
}

}  // namespace

TEST_CASE("logdet_hpd basics") {
  CHECK(logdet_hpd(ComplexMatrix::identity(4)) == Approx(0.0).margin(1e-15));

  ComplexMatrix d(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 3.0;
  CHECK(logdet_hpd(d) == Approx(1.79175946922805500).epsilon(1e-14));

  // I + v v^H with v = (1,1)/sqrt(2): determinant 1 + v^H v = 2.
  ComplexMatrix m = ComplexMatrix::identity(2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) += cplx(0.5, 0.0);
  CHECK(logdet_hpd(m) == Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(std::log(lu_det(m).real()) == Approx(std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("logdet_hpd errors") {
  ComplexMatrix bad(2, 2);
  bad(0, 0) = 1.0;
  bad(0, 1) = cplx(0.0, 1.0);
  bad(1, 0) = cplx(0.0, 1.0);  // not conjugate-symmetric
  bad(1, 1) = 1.0;
  CHECK_THROWS_AS(logdet_hpd(bad), shape_error);

  ComplexMatrix npd = ComplexMatrix::identity(3);
  npd(2, 2) = -1.0;
  CHECK_THROWS_WITH(logdet_hpd(npd), Catch::Matchers::ContainsSubstring("pivot at index 2"));
}

TEST_CASE("logdet_hpd matches LU determinant on random HPD") {
  for (int n : {2, 5, 9, 16}) {
    const ComplexMatrix a = random_hermitian_psd(n, 100 + n);
    const double viaLu = std::log(std::abs(lu_det(a)));
    CHECK(logdet_hpd(a) == Approx(viaLu).epsilon(1e-10));
  }
}

TEST_CASE("hermitian_eig closed forms") {
  ComplexMatrix d(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const EigResult e = hermitian_eig(d);
  CHECK(e.values[0] == Approx(3.0));
  CHECK(e.values[1] == Approx(1.0));
  CHECK(std::abs(e.vectors(0, 0)) == Approx(1.0));
  CHECK(std::abs(e.vectors(1, 1)) == Approx(1.0));

  ComplexMatrix r(2, 2);
  r(0, 0) = 1.0;
  r(0, 1) = 0.5;
  r(1, 0) = 0.5;
  r(1, 1) = 1.0;
  const EigResult e2 = hermitian_eig(r);
  CHECK(e2.values[0] == Approx(1.5).epsilon(1e-13));
  CHECK(e2.values[1] == Approx(0.5).epsilon(1e-13));
}

TEST_CASE("hermitian_eig reconstruction, unitarity, trace") {
  for (int n : {3, 4, 7}) {
    const ComplexMatrix a = random_hermitian_psd(n, 300 + n);
    const EigResult e = hermitian_eig(a);

    // descending and (numerically) nonnegative
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += a(i, i).real();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += e.values[i];
      if (i) CHECK(e.values[i] <= e.values[i - 1] + 1e-12);
      CHECK(e.values[i] >= -1e-12);
    }
    CHECK(sum == Approx(trace).epsilon(1e-10));

    // A = V diag(lambda) V^H
    ComplexMatrix vl = e.vectors;
    for (int c = 0; c < n; ++c)
      for (int r0 = 0; r0 < n; ++r0) vl(r0, c) *= e.values[c];
    const ComplexMatrix rec = matmul(vl, adjoint(e.vectors));
    double num = 0.0, den = 0.0;
    for (int r0 = 0; r0 < n; ++r0)
      for (int c = 0; c < n; ++c) {
        num += std::norm(rec(r0, c) - a(r0, c));
        den += std::norm(a(r0, c));
      }
    CHECK(std::sqrt(num / den) < 1e-10);

    const ComplexMatrix vhv = matmul(adjoint(e.vectors), e.vectors);
    double off = 0.0;
    for (int r0 = 0; r0 < n; ++r0)
      for (int c = 0; c < n; ++c)
        off += std::norm(vhv(r0, c) - (r0 == c ? cplx(1.0, 0.0) : cplx(0.0, 0.0)));
    CHECK(std::sqrt(off) < 1e-10);
  }
}

TEST_CASE("poly_roots_neg factored cases") {
  {
    const auto w = poly_roots_neg({{2.0, 3.0, 1.0}});  // (t+1)(t+2)
    REQUIRE(w.size() == 2);
    CHECK(w[0].real() == Approx(1.0).epsilon(1e-12));
    CHECK(w[1].real() == Approx(2.0).epsilon(1e-12));
    CHECK(w[0].imag() == 0.0);
  }
  {
    const auto w = poly_roots_neg({{1.0, 1.0}});  // 1 + t
    REQUIRE(w.size() == 1);
    CHECK(w[0].real() == Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(poly_roots_neg({{1.0, 2.0, 0.0}}), domain_error);
  CHECK_THROWS_AS(poly_roots_neg({{1.0}}), domain_error);
}

TEST_CASE("poly_roots_neg reconstruction on random positive coefficients") {
  const std::uint64_t key = rng::derive_key(7, 77);
  std::uint64_t ctr = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng::uniform(key, ctr++) * 7);  // 2..8
    PolyRealCoeffs p;
    p.c.resize(d + 1);
    for (int l = 0; l <= d; ++l)
      p.c[l] = std::pow(10.0, -2.0 + 4.0 * rng::uniform(key, ctr++));
    const auto omega = poly_roots_neg(p);
    REQUIRE(static_cast<int>(omega.size()) == d);

    // multiply back prod (t + omega_l) and compare against p / c_d
    std::vector<cplx> coef{1.0};
    for (const auto& w : omega) {
      std::vector<cplx> next(coef.size() + 1, cplx(0, 0));
      for (std::size_t i = 0; i < coef.size(); ++i) {
        next[i + 1] += coef[i];
        next[i] += coef[i] * w;
      }
      coef = next;
    }
    for (int l = 0; l <= d; ++l) {
      const double want = p.c[l] / p.c[d];
      CHECK(std::abs(coef[l] - want) <= 1e-10 * std::max(1.0, std::abs(want)));
      CHECK(std::abs(coef[l].imag()) <= 1e-10 * std::max(1.0, std::abs(want)));
    }

    // Descartes: positive coefficients admit no positive real root, so no
    // omega is real and nonpositive (complex pairs may stray off-axis).
    for (const auto& w : omega)
      if (w.imag() == 0.0) CHECK(w.real() > 0.0);

    // complex omegas in conjugate pairs
    for (const auto& w : omega)
      if (w.imag() != 0.0) {
        bool found = false;
        for (const auto& v : omega)
          if (v == std::conj(w)) found = true;
        CHECK(found);
      }
  }
}

TEST_CASE("lu_det on known matrices") {
  RealMatrix a{{2.0, 1.0}, {1.0, 3.0}};
  CHECK(lu_det(a) == Approx(5.0).epsilon(1e-14));
  RealMatrix s{{1.0, 2.0}, {2.0, 4.0}};
  CHECK(lu_det(s) == Approx(0.0).margin(1e-14));
}
