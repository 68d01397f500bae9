// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "macrocap/channel.hpp"
#include "macrocap/combinatorics.hpp"
#include "macrocap/errors.hpp"
#include "macrocap/matrix.hpp"

namespace macrocap {

// Column-subset permanent cost grows like C(N,i) C(n_R,i) 2^i; fine through
// N = 8, unreasonable past it.
inline constexpr int kBoundSizeLimit = 8;

struct BoundBreakdown {
  std::vector<double> theta;  // theta_i multiplies gamma_bar^i, i = 0..N
  double bound_bits = 0.0;
  double lowsnr_bits = 0.0;
  double highsnr_bits = 0.0;
};

namespace detail {

// Tall orientation for the subset permanents; |I + g H^H H| = |I + g H H^H|
// makes the transpose free.
inline RealMatrix tall_powers(const PowerMatrix& pm) {
  return pm.n_r() >= pm.n_t() ? pm.p : pm.p.transposed();
}

}  // namespace detail

// Jensen upper bound on the ergodic sum capacity:
//   E{C} <= log2( sum_{i=0}^N theta_i gamma_bar^i ),
//   theta_i = sum over i-column subsets of Perm(P^{subset}).
// Exact polynomial evaluation; the only inequality is Jensen's.
inline BoundBreakdown jensen_bound(const PowerMatrix& pm, double gamma_bar) {
  pm.validate();
  if (!(gamma_bar > 0.0)) throw domain_error("jensen_bound: gamma_bar must be > 0");
  const RealMatrix p = detail::tall_powers(pm);
  const int n = p.cols();
  if (n > kBoundSizeLimit)
    throw size_error("jensen_bound: N = " + std::to_string(n) + " exceeds limit " +
                     std::to_string(kBoundSizeLimit));

  BoundBreakdown out;
  out.theta.resize(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    double s = 0.0;
    for (const auto& cols : subset_iter(n, i)) s += perm_rect(p.select_cols(cols));
    out.theta[i] = s;
  }

  double poly = 0.0;
  double g = 1.0;
  for (int i = 0; i <= n; ++i) {
    poly += out.theta[i] * g;
    g *= gamma_bar;
  }
  out.bound_bits = std::log2(poly);

  const double pt = out.theta[1];  // sum of all powers
  out.lowsnr_bits = std::log2(1.0 + pt * gamma_bar);
  out.highsnr_bits = std::log2(1.0 + out.theta[n] * std::pow(gamma_bar, n));
  return out;
}

// One-term low-SNR approximation: log2(1 + P_T gamma_bar). Always below the
// full bound (it drops nonnegative terms).
inline double low_snr_approx(const PowerMatrix& pm, double gamma_bar) {
  pm.validate();
  if (!(gamma_bar > 0.0)) throw domain_error("low_snr_approx: gamma_bar must be > 0");
  return std::log2(1.0 + pm.total_power() * gamma_bar);
}

// One-term high-SNR approximation: log2(1 + Perm(P) gamma_bar^N).
inline double high_snr_approx(const PowerMatrix& pm, double gamma_bar) {
  pm.validate();
  if (!(gamma_bar > 0.0)) throw domain_error("high_snr_approx: gamma_bar must be > 0");
  const RealMatrix p = detail::tall_powers(pm);
  if (p.cols() > kBoundSizeLimit)
    throw size_error("high_snr_approx: size exceeds limit");
  const double perm = perm_rect(p);
  return std::log2(1.0 + perm * std::pow(gamma_bar, p.cols()));
}

}  // namespace macrocap
