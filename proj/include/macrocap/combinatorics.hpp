// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "macrocap/errors.hpp"
#include "macrocap/linalg.hpp"
#include "macrocap/matrix.hpp"

namespace macrocap {

// Permanents are #P-hard; Ryser at n_R-sized inputs is instant, but refuse
// anything that would silently run for hours.
inline constexpr int kPermSizeLimit = 20;

namespace detail {

// Neumaier-compensated accumulator; Ryser's alternating signs cancel badly
// without it.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }

  double value() const { return sum + comp; }
};

}  // namespace detail

// Lexicographic k-subsets of {0, ..., n-1}. k = 0 yields one empty subset;
// k > n yields nothing.
class SubsetRange {
 public:
  SubsetRange(int n, int k) : n_(n), k_(k) {
    if (n < 0 || k < 0) throw domain_error("subset_iter: n and k must be nonnegative");
  }

  class iterator {
   public:
    iterator() = default;
    iterator(int n, int k) : n_(n), k_(k), done_(k > n) {
      idx_.resize(k_);
      for (int i = 0; i < k_; ++i) idx_[i] = i;
    }

    const std::vector<int>& operator*() const { return idx_; }

    iterator& operator++() {
      int i = k_ - 1;
      while (i >= 0 && idx_[i] == n_ - k_ + i) --i;
      if (i < 0) {
        done_ = true;
        return *this;
      }
      ++idx_[i];
      for (int j = i + 1; j < k_; ++j) idx_[j] = idx_[j - 1] + 1;
      return *this;
    }

    bool operator!=(const iterator& other) const { return done_ != other.done_; }

    static iterator end_sentinel() {
      iterator it;
      it.done_ = true;
      return it;
    }

   private:
    int n_ = 0;
    int k_ = 0;
    bool done_ = false;
    std::vector<int> idx_;
  };

  iterator begin() const { return iterator(n_, k_); }
  iterator end() const { return iterator::end_sentinel(); }

 private:
  int n_;
  int k_;
};

inline SubsetRange subset_iter(int n, int k) { return SubsetRange(n, k); }

// Permanent of a square matrix by Ryser's inclusion-exclusion with
// Gray-code column updates:
//   perm(A) = (-1)^n sum_{S != empty} (-1)^|S| prod_i sum_{j in S} A_ij.
inline double perm_square(const RealMatrix& a) {
  if (a.rows() != a.cols()) throw shape_error("perm_square: matrix must be square");
  const int n = a.rows();
  if (n > kPermSizeLimit)
    throw size_error("perm_square: n = " + std::to_string(n) + " exceeds limit " +
                     std::to_string(kPermSizeLimit));
  if (n == 0) return 1.0;  // empty-matrix convention

  std::vector<double> rowsum(n, 0.0);
  detail::CompensatedSum acc;
  std::uint32_t prev = 0;
  const std::uint32_t count = 1u << n;
  for (std::uint32_t g = 1; g < count; ++g) {
    const std::uint32_t gray = g ^ (g >> 1);
    const std::uint32_t changed = gray ^ prev;
    const int j = std::countr_zero(changed);
    const double dir = (gray & changed) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) rowsum[i] += dir * a(i, j);
    prev = gray;

    double prod = (std::popcount(gray) % 2) ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) prod *= rowsum[i];
    acc.add(prod);
  }
  return ((n % 2) ? -1.0 : 1.0) * acc.value();
}

// Permanent of a tall rectangular matrix (rows >= cols): the sum of the
// square permanents over all row selections. Equals perm_square when square.
inline double perm_rect(const RealMatrix& a) {
  const int m = a.rows();
  const int n = a.cols();
  if (m < n)
    throw shape_error("perm_rect: needs rows >= cols (transpose the input)");
  if (n == 0) return 1.0;
  if (m == n) return perm_square(a);

  detail::CompensatedSum acc;
  for (const auto& rows : subset_iter(m, n)) acc.add(perm_square(a.select_rows(rows)));
  return acc.value();
}

// Elementary symmetric function e_k of the given values, by the stable
// one-pass recurrence.
inline double esf(const std::vector<double>& values, int k) {
  if (k < 0) throw domain_error("esf: negative degree");
  const int n = static_cast<int>(values.size());
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int j = 0; j < n; ++j) {
    const int top = std::min(j + 1, k);
    for (int i = top; i >= 1; --i) e[i] += values[j] * e[i - 1];
  }
  return e[k];
}

// Sum of all k x k principal minors (Tr_k). Tr_0 = 1, Tr_k = 0 for k > n.
template <class T>
T tr_k(const Mat<T>& m, int k) {
  if (m.rows() != m.cols()) throw shape_error("tr_k: matrix must be square");
  if (k < 0) throw domain_error("tr_k: negative degree");
  const int n = m.rows();
  if (k == 0) return T{1};
  if (k > n) return T{0};
  T total{};
  for (const auto& idx : subset_iter(n, k)) total += lu_det(m.principal(idx));
  return total;
}

}  // namespace macrocap
