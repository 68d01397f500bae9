// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace macrocap {

// Counter-based randomness: every draw is a pure function of (key, counter),
// so trials can be evaluated in any order, on any number of workers, and
// reproduce bit-for-bit. Philox 2x64-10 round function.
namespace rng {

inline constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ULL;
inline constexpr std::uint64_t kPhiloxW = 0x9E3779B97F4A7C15ULL;

inline std::array<std::uint64_t, 2> philox2x64(std::uint64_t key, std::uint64_t ctr_lo,
                                               std::uint64_t ctr_hi = 0) {
  std::uint64_t x0 = ctr_lo;
  std::uint64_t x1 = ctr_hi;
  std::uint64_t k = key;
  for (int round = 0; round < 10; ++round) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(x0) * kPhiloxM;
    const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
    const std::uint64_t lo = static_cast<std::uint64_t>(prod);
    x0 = hi ^ k ^ x1;
    x1 = lo;
    k += kPhiloxW;
  }
  return {x0, x1};
}

// Distinct named substreams from one user seed.
inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag) {
  return philox2x64(seed, tag, 0xA5A5A5A5A5A5A5A5ULL)[0];
}

// 53-bit mantissa mapped to (0, 1]; the closed upper end keeps log(u) finite.
inline double u01(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

struct NormalPair {
  double g0;
  double g1;
};

// Box-Muller on one 128-bit counter block.
inline NormalPair normal_pair(std::uint64_t key, std::uint64_t ctr) {
  const auto w = philox2x64(key, ctr);
  const double u1 = u01(w[0]);
  const double u2 = u01(w[1]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 6.283185307179586476925286766559 * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

inline double uniform(std::uint64_t key, std::uint64_t ctr) {
  return u01(philox2x64(key, ctr)[0]);
}

}  // namespace rng
}  // namespace macrocap
