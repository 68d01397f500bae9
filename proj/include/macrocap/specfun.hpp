// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "macrocap/errors.hpp"
#include "macrocap/matrix.hpp"
#include "macrocap/quadrature.hpp"

namespace macrocap {

namespace detail {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

inline void check_e1_domain(cplx z) {
  if (z == cplx(0.0, 0.0)) throw domain_error("e1: z = 0");
  if (z.imag() == 0.0 && z.real() < 0.0)
    throw domain_error("e1: z on the branch cut (-inf, 0)");
}

// Power series, |z| <= 4:
//   E1(z) = -gamma - ln z + sum_{n>=1} (-1)^{n+1} z^n / (n n!)
inline cplx e1_series(cplx z) {
  cplx sum(0.0, 0.0);
  cplx term(1.0, 0.0);  // z^n / n!
  for (int n = 1; n <= 120; ++n) {
    term *= z / static_cast<double>(n);
    const cplx add = ((n % 2) ? term : -term) / static_cast<double>(n);
    sum += add;
    if (std::abs(add) <= 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return -kEulerGamma - std::log(z) + sum;
}

// Modified-Lentz continued fraction, |z| > 4. Returns e^z E1(z), the
// overflow-free quantity:
//   e^z E1(z) = 1/(z+1-) 1/(z+3-) 4/(z+5-) 9/(z+7-) ...
inline cplx exp_e1_cf(cplx z) {
  const double fpmin = 1e-290;
  cplx b = z + 1.0;
  cplx c = 1.0 / fpmin;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i <= 400; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + a / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) <= 1e-16) break;
  }
  return h;
}

}  // namespace detail

// Principal-branch exponential integral E1(z), z off the cut (-inf, 0].
inline cplx e1(cplx z) {
  detail::check_e1_domain(z);
  if (std::abs(z) <= 4.0) return detail::e1_series(z);
  return std::exp(-z) * detail::exp_e1_cf(z);
}

inline double e1(double x) {
  if (x <= 0.0) throw domain_error("e1: requires x > 0 on the real line");
  return e1(cplx(x, 0.0)).real();
}

// e^z E1(z) without overflow; finite for real z up to ~1e300.
inline cplx exp_e1(cplx z) {
  detail::check_e1_domain(z);
  if (std::abs(z) <= 4.0) return std::exp(z) * detail::e1_series(z);
  return detail::exp_e1_cf(z);
}

inline double exp_e1(double x) {
  if (x <= 0.0) throw domain_error("exp_e1: requires x > 0 on the real line");
  return exp_e1(cplx(x, 0.0)).real();
}

namespace detail {

// e^{-y} Ei(y) for y > 0.
inline double scaled_ei(double y) {
  if (y <= 40.0) {
    // Ei(y) = gamma + ln y + sum y^n/(n n!); all terms positive.
    double sum = 0.0;
    double term = 1.0;
    for (int n = 1; n <= 220; ++n) {
      term *= y / n;
      const double add = term / n;
      sum += add;
      if (add <= 1e-17 * sum) break;
    }
    return std::exp(-y) * (kEulerGamma + std::log(y) + sum);
  }
  // Asymptotic: e^{-y} Ei(y) ~ (1/y) sum_k k!/y^k, truncated at the
  // smallest term.
  double term = 1.0 / y;
  double sum = term;
  for (int k = 1; k <= 60; ++k) {
    const double next = term * k / y;
    if (next >= term) break;
    sum += next;
    term = next;
  }
  return sum;
}

}  // namespace detail

// Principal-value continuation of e^x E1(x) to the whole real line:
// for x < 0 this is -e^x Ei(-x), the common real part of E1(x +- i0).
inline double exp_e1_pv(double x) {
  if (x == 0.0) throw domain_error("exp_e1_pv: x = 0");
  if (x > 0.0) return exp_e1(x);
  return -detail::scaled_ei(-x);
}

namespace detail {

inline QuadratureSpec d1_quadrature_spec() {
  QuadratureSpec q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-12;
  q.max_subdivisions = 4000;
  return q;
}

// Truncation point: past T the integrand is bounded by e^{-t}(|ln(t+a)|+1).
inline double exp_tail_cutoff(double a, double abs_tol) {
  double t = 35.0;
  while (std::exp(-t) * (std::abs(std::log(t + a)) + 1.0) >= 0.01 * abs_tol && t < 800.0)
    t += 5.0;
  return t;
}

// Piecewise adaptive integration with interior break points (log kinks sit
// at panel boundaries, which Gauss-Kronrod nodes never touch).
template <class F>
double integrate_split(const F& f, double a, double b, std::vector<double> breaks,
                       const QuadratureSpec& q) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(a, breaks[i]);
    const double hi = std::min(b, breaks[i + 1]);
    if (hi > lo) total += integrate(f, lo, hi, q);
  }
  return total;
}

// J1(x, b) = pv int_0^inf e^{-s} ln|s + x| / (s + b) ds, x != 0, b != 0.
// For b < 0 the simple pole at s = -b is handled by symmetric subtraction;
// the value is the common real part of the analytic continuations.
inline double j1_pv(double x, double b) {
  if (x == 0.0) throw degeneracy_error("j1_pv: log point at the domain boundary");
  if (b == 0.0) throw degeneracy_error("j1_pv: pole at the domain boundary");
  const QuadratureSpec q = d1_quadrature_spec();
  const double cutoff =
      std::max(exp_tail_cutoff(std::abs(x) + 1.0, q.abs_tol), 2.0 * std::abs(x));

  auto g = [x](double s) { return std::exp(-s) * std::log(std::abs(s + x)); };

  const double pole = -b;
  if (pole <= 0.0 || pole >= cutoff) {
    // No pole inside the truncated domain.
    std::vector<double> breaks;
    if (x < 0.0 && -x < cutoff) breaks.push_back(-x);
    return integrate_split([&](double s) { return g(s) / (s + b); }, 0.0, cutoff, breaks, q);
  }

  if (std::abs(x - b) <= 1e-7 * (std::abs(x) + std::abs(b)))
    throw degeneracy_error("j1_pv: log point collides with the pole");

  // pv over [0, 2 pole] by subtracting g(pole); regular beyond.
  const double gp = g(pole);
  std::vector<double> breaks{pole};
  if (x < 0.0 && -x > 0.0 && -x < 2.0 * pole) breaks.push_back(-x);
  double total = integrate_split(
      [&](double s) { return (g(s) - gp) / (s - pole); }, 0.0, 2.0 * pole, breaks, q);
  if (cutoff > 2.0 * pole) {
    std::vector<double> tail_breaks;
    if (x < 0.0 && -x > 2.0 * pole && -x < cutoff) tail_breaks.push_back(-x);
    total += integrate_split([&](double s) { return g(s) / (s - pole); }, 2.0 * pole, cutoff,
                             tail_breaks, q);
  }
  return total;
}

// (f(u) - f(v)) / (v - u) for f = exp_e1_pv, with a series fallback when
// u and v almost coincide (f' = f - 1/x, f'' = f' + 1/x^2).
inline double exp_e1_pv_diffq(double u, double v) {
  if (u == 0.0 || v == 0.0) throw degeneracy_error("exp_e1_pv_diffq: zero argument");
  if (std::abs(v - u) >= 1e-6 * std::max(std::abs(u), std::abs(v)))
    return (exp_e1_pv(u) - exp_e1_pv(v)) / (v - u);
  const double f = exp_e1_pv(u);
  const double fp = f - 1.0 / u;
  const double fpp = fp + 1.0 / (u * u);
  return -(fp + 0.5 * fpp * (v - u));
}

// Finite-part extensions of the H integrals, valid for any nonzero real
// parameters (the exact engine's partial fractions push parameters through
// zero; only the summed result is a classical integral).
inline double h1_pv(double a, double b, double c) {
  if (a == 0.0 || b == 0.0 || c == 0.0)
    throw degeneracy_error("h1_pv: zero parameter in the cascade");
  return std::log(std::abs(c)) * exp_e1_pv(b) + j1_pv(a / c, b);
}

inline double h2_pv(double a, double b, double c) {
  if (a == 0.0 || b == 0.0 || c == 0.0)
    throw degeneracy_error("h2_pv: zero parameter in the cascade");
  const double x = a / c;
  return std::log(std::abs(a)) / b - h1_pv(a, b, c) + exp_e1_pv_diffq(b, x);
}

}  // namespace detail

// e^b D1(a, b) = int_0^inf e^{-s} ln(s + b + a) / (s + b) ds. This is the
// scaled form the closed forms need; it stays finite for large b.
inline double exp_d1(double a, double b) {
  if (!(b > 0.0)) throw domain_error("exp_d1: requires b > 0");
  if (!(b + a > 0.0)) throw domain_error("exp_d1: requires a > -b (log domain)");
  return detail::j1_pv(a + b, b);
}

// D1(a, b) = int_b^inf e^{-t} ln(t + a) / t dt, for b > 0, a > -b.
inline double d1(double a, double b) { return std::exp(-b) * exp_d1(a, b); }

// H1(a,b,c) = int_0^inf e^{-t} ln(ct + a)/(t + b) dt
//           = e^b [E1(b) ln c + D1(a/c - b, b)].
inline double h1(double a, double b, double c) {
  if (!(b > 0.0)) throw domain_error("h1: requires b > 0");
  if (!(c > 0.0)) throw domain_error("h1: requires c > 0");
  if (!(a > 0.0)) throw domain_error("h1: requires a > 0");
  return detail::h1_pv(a, b, c);
}

// H2(a,b,c) = int_0^inf e^{-t} ln(ct + a)/(t + b)^2 dt. Integration by
// parts gives
//   H2 = ln(a)/b - H1(a,b,c) + [e^b E1(b) - e^x E1(x)] / (x - b),  x = a/c,
// with a series fallback where the last factor cancels catastrophically.
inline double h2(double a, double b, double c) {
  if (!(b > 0.0)) throw domain_error("h2: requires b > 0");
  if (!(c > 0.0)) throw domain_error("h2: requires c > 0");
  if (!(a > 0.0)) throw domain_error("h2: requires a > 0");
  return detail::h2_pv(a, b, c);
}

}  // namespace macrocap
