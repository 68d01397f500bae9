// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "macrocap/channel.hpp"
#include "macrocap/errors.hpp"
#include "macrocap/linalg.hpp"
#include "macrocap/matrix.hpp"
#include "macrocap/rng.hpp"

namespace macrocap {

struct McEstimate {
  double mean_bits = 0.0;
  double stderr_bits = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// One fading realization: entry (i,k) ~ CN(0, P_ik), drawn from the counter
// stream at (key, trial); entries are mutually independent.
inline ComplexMatrix sample_channel(const PowerMatrix& pm, std::uint64_t key,
                                    std::uint64_t trial) {
  const int n_r = pm.n_r();
  const int n_t = pm.n_t();
  ComplexMatrix h(n_r, n_t);
  const std::uint64_t base = trial * static_cast<std::uint64_t>(n_r) * n_t;
  for (int i = 0; i < n_r; ++i)
    for (int k = 0; k < n_t; ++k) {
      const rng::NormalPair g =
          rng::normal_pair(key, base + static_cast<std::uint64_t>(i) * n_t + k);
      const double amp = std::sqrt(0.5 * pm.p(i, k));
      h(i, k) = cplx(amp * g.g0, amp * g.g1);
    }
  return h;
}

namespace detail {

// log2 |I + H H^H / sigma^2| evaluated on the smaller Gram side.
inline double capacity_sample_bits(const ComplexMatrix& h, double sigma2) {
  const bool tall = h.rows() >= h.cols();
  const int n = tall ? h.cols() : h.rows();
  const int m = tall ? h.rows() : h.cols();
  ComplexMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      cplx s(0.0, 0.0);
      for (int k = 0; k < m; ++k) {
        const cplx a = tall ? h(k, i) : h(i, k);
        const cplx b = tall ? h(k, j) : h(j, k);
        s += std::conj(a) * b;
      }
      g(i, j) = s / sigma2;
      g(j, i) = std::conj(g(i, j));
    }
    g(i, i) += 1.0;
  }
  return logdet_hpd(g) / 0.693147180559945309417232121458;
}

// Fixed-order pairwise reduction; the result does not depend on how the
// blocks were produced.
inline double pairwise_reduce(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::size_t n = v.size();
  while (n > 1) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
    if (n % 2) {
      v[half] = v[n - 1];
      n = half + 1;
    } else {
      n = half;
    }
  }
  return v[0];
}

}  // namespace detail

// Monte Carlo mean of log2 |I + H H^H / sigma^2|: the ground truth every
// analytical engine is checked against. Deterministic in (p, trials, seed).
inline McEstimate mc_capacity(const PowerMatrix& pm, double sigma2, std::uint64_t trials,
                              std::uint64_t seed) {
  pm.validate();
  if (trials < 2) throw domain_error("mc_capacity: trials must be >= 2");
  if (!(sigma2 > 0.0)) throw domain_error("mc_capacity: sigma^2 must be > 0");

  const std::uint64_t key = rng::derive_key(seed, /*tag=*/0x6D63);  // "mc"
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t nblocks = (trials + kBlock - 1) / kBlock;
  std::vector<double> bsum(nblocks, 0.0), bsq(nblocks, 0.0);

  for (std::uint64_t b = 0; b < nblocks; ++b) {
    const std::uint64_t lo = b * kBlock;
    const std::uint64_t hi = std::min(trials, lo + kBlock);
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t t = lo; t < hi; ++t) {
      const double x = detail::capacity_sample_bits(sample_channel(pm, key, t), sigma2);
      s += x;
      s2 += x * x;
    }
    bsum[b] = s;
    bsq[b] = s2;
  }

  const double sum = detail::pairwise_reduce(std::move(bsum));
  const double sumsq = detail::pairwise_reduce(std::move(bsq));
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
  McEstimate est;
  est.mean_bits = mean;
  est.stderr_bits = std::sqrt(var / n);
  est.trials = trials;
  est.seed = seed;
  return est;
}

}  // namespace macrocap
