// SPDX-License-Identifier: Apache-2.0
//
// Test-side oracles, kept independent of the library code paths they check:
// permutation-sum permanents, injective-map enumeration, composite-Simpson
// quadrature, and small Monte Carlo estimators.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "macrocap/linalg.hpp"
#include "macrocap/matrix.hpp"
#include "macrocap/rng.hpp"

namespace oracles {

using macrocap::ComplexMatrix;
using macrocap::cplx;
using macrocap::RealMatrix;

// Permanent by direct permutation sum, O(n!).
inline double perm_naive(const RealMatrix& a) {
  const int n = a.rows();
  std::vector<int> cols(n);
  for (int i = 0; i < n; ++i) cols[i] = i;
  double total = 0.0;
  std::function<void(int, double)> rec = [&](int row, double prod) {
    if (row == n) {
      total += prod;
      return;
    }
    for (int i = row; i < n; ++i) {
      std::swap(cols[row], cols[i]);
      rec(row + 1, prod * a(row, cols[row]));
      std::swap(cols[row], cols[i]);
    }
  };
  if (n == 0) return 1.0;
  rec(0, 1.0);
  return total;
}

// Rectangular permanent (rows >= cols) by enumerating injective maps from
// columns to rows.
inline double perm_rect_naive(const RealMatrix& a) {
  const int m = a.rows();
  const int n = a.cols();
  std::vector<bool> used(m, false);
  double total = 0.0;
  std::function<void(int, double)> rec = [&](int col, double prod) {
    if (col == n) {
      total += prod;
      return;
    }
    for (int r = 0; r < m; ++r) {
      if (used[r]) continue;
      used[r] = true;
      rec(col + 1, prod * a(r, col));
      used[r] = false;
    }
  };
  if (n == 0) return 1.0;
  rec(0, 1.0);
  return total;
}

// Composite Simpson with interval doubling until two refinements agree.
// Kahan accumulation keeps the fine grids from drowning in roundoff.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double rel_tol = 1e-12, int max_doublings = 18) {
  auto pass = [&](long n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    double comp = 0.0;
    for (long i = 1; i < n; ++i) {
      const double term = f(a + i * h) * (i % 2 ? 4.0 : 2.0);
      const double t = s + term;
      comp += std::abs(s) >= std::abs(term) ? (s - t) + term : (term - t) + s;
      s = t;
    }
    return (s + comp) * h / 3.0;
  };
  long n = 64;
  double prev = pass(n);
  for (int d = 0; d < max_doublings; ++d) {
    n *= 2;
    const double cur = pass(n);
    if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-30)) return cur;
    prev = cur;
  }
  return prev;
}

// E1 by quadrature of its defining integral; t = x e^u flattens the 1/t
// spike so the oracle stays accurate at small x.
inline double e1_quad(double x, double rel_tol = 1e-12) {
  const double upper = std::log1p(70.0 / x);
  return simpson([x](double u) { return std::exp(-x * std::exp(u)); }, 0.0, upper, rel_tol);
}

inline double d1_quad(double a, double b, double rel_tol = 1e-12) {
  return simpson([a](double t) { return std::exp(-t) * std::log(t + a) / t; }, b, b + 60.0,
                 rel_tol);
}

inline double h1_quad(double a, double b, double c, double rel_tol = 1e-11) {
  return simpson([=](double t) { return std::exp(-t) * std::log(c * t + a) / (t + b); }, 0.0,
                 60.0, rel_tol);
}

inline double h2_quad(double a, double b, double c, double rel_tol = 1e-11) {
  return simpson(
      [=](double t) { return std::exp(-t) * std::log(c * t + a) / ((t + b) * (t + b)); }, 0.0,
      60.0, rel_tol);
}

// Asymptotic series e^x E1(x) ~ 1/x - 1/x^2 + 2/x^3 - 6/x^4 + ...
inline double exp_e1_asymptotic(double x, int terms = 8) {
  double term = 1.0 / x;
  double sum = 0.0;
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= -static_cast<double>(k + 1) / x;
  }
  return sum;
}

// Complex Gaussian matrix with E{X o X} = A, for the Lemma-style MC checks.
inline ComplexMatrix gaussian_with_power(const RealMatrix& a, std::uint64_t key,
                                         std::uint64_t sample) {
  ComplexMatrix x(a.rows(), a.cols());
  const std::uint64_t base =
      sample * static_cast<std::uint64_t>(a.rows()) * a.cols();
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) {
      const auto g = macrocap::rng::normal_pair(
          key, base + static_cast<std::uint64_t>(r) * a.cols() + c);
      const double amp = std::sqrt(0.5 * a(r, c));
      x(r, c) = cplx(amp * g.g0, amp * g.g1);
    }
  return x;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double s = 0.0;
  for (double v : xs) s += v;
  const double mean = s / n;
  double q = 0.0;
  for (double v : xs) q += (v - mean) * (v - mean);
  return {mean, std::sqrt(q / (n - 1.0) / n)};
}

// E{ |X^H X| } estimated by Monte Carlo, X built from entry powers A.
inline MeanSe mc_gram_det(const RealMatrix& a, int samples, std::uint64_t seed) {
  const std::uint64_t key = macrocap::rng::derive_key(seed, 0xDE7);
  std::vector<double> xs(samples);
  for (int s = 0; s < samples; ++s) {
    const ComplexMatrix x = gaussian_with_power(a, key, s);
    const ComplexMatrix g = macrocap::matmul(macrocap::adjoint(x), x);
    xs[s] = macrocap::lu_det(g).real();
  }
  return mean_se(xs);
}

}  // namespace oracles
