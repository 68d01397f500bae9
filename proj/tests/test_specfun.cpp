// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "macrocap/quadrature.hpp"
#include "macrocap/rng.hpp"
#include "macrocap/specfun.hpp"
#include "oracles.hpp"

using namespace macrocap;
using Catch::Approx;

TEST_CASE("e1 against quadrature of the defining integral") {
  CHECK(e1(1.0) == Approx(0.21938393439552027).epsilon(1e-12));
  CHECK(e1(0.5) == Approx(0.55977359477616081).epsilon(1e-12));
  CHECK(e1(1.0) == Approx(oracles::e1_quad(1.0)).epsilon(1e-11));

  for (double x : {0.01, 0.05, 0.3, 1.0, 3.7, 4.2, 9.0, 27.0, 50.0})
    CHECK(e1(x) == Approx(oracles::e1_quad(x)).epsilon(1e-10));
}

TEST_CASE("e1 domain and reflection") {
  CHECK_THROWS_AS(e1(cplx(0.0, 0.0)), domain_error);
  CHECK_THROWS_AS(e1(cplx(-2.0, 0.0)), domain_error);
  CHECK_THROWS_AS(e1(-1.0), domain_error);

  const std::uint64_t key = rng::derive_key(5, 15);
  for (int i = 0; i < 20; ++i) {
    const cplx z(0.05 + 8.0 * rng::uniform(key, 2 * i),
                 -4.0 + 8.0 * rng::uniform(key, 2 * i + 1));
    const cplx a = std::conj(e1(z));
    const cplx b = e1(std::conj(z));
    CHECK(std::abs(a - b) <= 1e-13 * std::abs(a));
  }
}

TEST_CASE("e1 derivative identity") {
  // d/dz E1 = -e^{-z}/z, checked by central differences.
  const std::uint64_t key = rng::derive_key(6, 16);
  for (int i = 0; i < 20; ++i) {
    const double x = 0.2 + 6.0 * rng::uniform(key, i);
    const double h = 1e-6 * std::max(1.0, x);
    const double num = (e1(x + h) - e1(x - h)) / (2.0 * h);
    const double want = -std::exp(-x) / x;
    CHECK(num == Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("exp_e1 scaling and asymptotics") {
  CHECK(exp_e1(1.0) == Approx(0.59634736232319407).epsilon(1e-12));
  CHECK(exp_e1(1000.0) == Approx(oracles::exp_e1_asymptotic(1000.0)).epsilon(1e-9));
  CHECK(exp_e1(cplx(3.0, 0.0)).imag() == 0.0);
  CHECK(std::isfinite(exp_e1(1e300)));

  for (double x = 0.01; x <= 30.0; x *= 2.3)
    CHECK(exp_e1(x) * std::exp(-x) == Approx(e1(x)).epsilon(1e-12));
}

TEST_CASE("exp_e1_pv continuation to negative arguments") {
  CHECK(exp_e1_pv(2.0) == exp_e1(2.0));
  // -e^{-1} Ei(1)
  CHECK(exp_e1_pv(-1.0) == Approx(-0.69717488323506607).epsilon(1e-12));
  // asymptotic regime on the negative side: -e^{-y} Ei(y) ~ -(1/y)(1 + 1/y)
  CHECK(exp_e1_pv(-900.0) == Approx(-(1.0 / 900.0) * (1.0 + 1.0 / 900.0)).epsilon(1e-5));
  CHECK_THROWS_AS(exp_e1_pv(0.0), domain_error);
}

TEST_CASE("d1 against an independent Simpson oracle") {
  CHECK(d1(0.0, 1.0) == Approx(0.097843197216670179).epsilon(1e-10));
  CHECK(d1(0.0, 1.0) ==
        Approx(oracles::simpson([](double t) { return std::exp(-t) * std::log(t) / t; }, 1.0,
                                61.0, 1e-13))
            .epsilon(1e-10));
  CHECK(d1(1.0, 5.0) == Approx(oracles::d1_quad(1.0, 5.0)).epsilon(1e-10));
  CHECK(d1(1.0, 5.0) > 0.0);

  // monotone in a
  double prev = d1(0.1, 1.0);
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    const double cur = d1(a, 1.0);
    CHECK(cur > prev);
    prev = cur;
  }

  CHECK_THROWS_AS(d1(0.0, -1.0), domain_error);
  CHECK_THROWS_AS(d1(-2.0, 1.0), domain_error);
}

TEST_CASE("h1 closed form equals its defining integral") {
  // H1(1,1,1) = e^1 [E1(1) ln 1 + D1(0,1)] = e * D1(0,1)
  CHECK(h1(1.0, 1.0, 1.0) == Approx(0.26596538503240918).epsilon(1e-10));
  CHECK(h1(1.0, 1.0, 1.0) == Approx(std::exp(1.0) * d1(0.0, 1.0)).epsilon(1e-12));

  // c = 1 kills the ln c term.
  CHECK(h1(2.5, 0.7, 1.0) == Approx(exp_d1(2.5 - 0.7, 0.7)).epsilon(1e-13));

  for (double a : {0.2, 1.0, 5.0})
    for (double b : {0.1, 1.0, 4.0})
      for (double c : {0.5, 1.0, 3.0})
        CHECK(h1(a, b, c) == Approx(oracles::h1_quad(a, b, c)).epsilon(1e-8));
}

TEST_CASE("h2 closed form equals its defining integral") {
  CHECK(h2(2.0, 1.0, 1.0) == Approx(oracles::h2_quad(2.0, 1.0, 1.0)).epsilon(1e-8));
  CHECK(h2(2.0, 1.0, 1.0) == Approx(0.35856323778799701).epsilon(1e-9));

  for (double a : {0.2, 1.0, 5.0})
    for (double b : {0.1, 1.0, 4.0})
      for (double c : {0.5, 1.0, 3.0})
        CHECK(h2(a, b, c) == Approx(oracles::h2_quad(a, b, c)).epsilon(1e-8));

  // removable singularity at a/c = b: series fallback vs quadrature
  CHECK(h2(1.5, 1.5, 1.0) == Approx(oracles::h2_quad(1.5, 1.5, 1.0)).epsilon(1e-6));
  CHECK(h2(1.5 * (1.0 + 1e-9), 1.5, 1.0) ==
        Approx(oracles::h2_quad(1.5, 1.5, 1.0)).epsilon(1e-6));
}

TEST_CASE("finite-part extensions agree with principal values") {
  // j1_pv with a pole inside the domain, against symmetric excision with
  // Richardson extrapolation in the excision width.
  const double x = 2.0, b = -1.5;
  const double p = -b;
  auto f = [&](double s) { return std::exp(-s) * std::log(std::abs(s + x)) / (s + b); };
  auto pv_excised = [&](double eps) {
    return oracles::simpson(f, 0.0, p - 0.5, 1e-12) +
           oracles::simpson(f, p - 0.5, p - eps, 1e-12) +
           oracles::simpson(f, p + eps, p + 0.5, 1e-12) +
           oracles::simpson(f, p + 0.5, 60.0, 1e-12);
  };
  const double pv = 2.0 * pv_excised(5e-4) - pv_excised(1e-3);
  CHECK(detail::j1_pv(x, b) == Approx(pv).margin(5e-7));

  // log point inside the domain, no pole: handle the local log mass
  // analytically and Simpson the smooth remainder.
  {
    const double c = 0.8, bb = 2.0, delta = 1e-3;
    auto g = [&](double s) { return std::exp(-s) * std::log(std::abs(s - c)) / (s + bb); };
    auto phi = [&](double s) { return std::exp(-s) / (s + bb); };
    const double h = 1e-3;
    const double phi2 = (phi(c + h) - 2.0 * phi(c) + phi(c - h)) / (h * h);
    const double local = phi(c) * 2.0 * delta * (std::log(delta) - 1.0) +
                         phi2 * (2.0 / 3.0) * delta * delta * delta *
                             (std::log(delta) - 1.0 / 3.0);
    const double ref = oracles::simpson(g, 0.0, c - 0.1, 1e-12) +
                       oracles::simpson(g, c - 0.1, c - delta, 1e-12) + local +
                       oracles::simpson(g, c + delta, c + 0.1, 1e-12) +
                       oracles::simpson(g, c + 0.1, 60.0, 1e-12);
    CHECK(detail::j1_pv(-c, bb) == Approx(ref).margin(1e-8));
  }
}

TEST_CASE("quadrature engine sanity") {
  const double v = integrate([](double t) { return std::exp(-t); }, 0.0, 50.0);
  CHECK(v == Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(integrate([](double t) { return t; }, 0.0, 1.0, {0.0, 1e-10, 10}),
                  domain_error);
}
