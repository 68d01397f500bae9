// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "macrocap/errors.hpp"

namespace macrocap {

using cplx = std::complex<double>;

// Dense row-major matrix. Dimensions here are tiny (antenna counts), so
// plain loops everywhere; no views, no expression templates.
template <class T>
class Mat {
 public:
  Mat() = default;

  Mat(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw shape_error("matrix dimensions must be nonnegative");
  }

  Mat(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = static_cast<int>(init.size());
    cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
    a_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& row : init) {
      if (static_cast<int>(row.size()) != cols_)
        throw shape_error("ragged initializer for matrix");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * cols_ + c];
  }

  const std::vector<T>& data() const { return a_; }

  Mat transposed() const {
    Mat t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  // Rows picked by `idx` (strictly increasing), all columns.
  Mat select_rows(const std::vector<int>& idx) const {
    Mat s(static_cast<int>(idx.size()), cols_);
    for (int r = 0; r < s.rows(); ++r)
      for (int c = 0; c < cols_; ++c) s(r, c) = (*this)(idx[r], c);
    return s;
  }

  Mat select_cols(const std::vector<int>& idx) const {
    Mat s(rows_, static_cast<int>(idx.size()));
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < s.cols(); ++c) s(r, c) = (*this)(r, idx[c]);
    return s;
  }

  // Principal submatrix on rows and columns `idx`.
  Mat principal(const std::vector<int>& idx) const {
    const int k = static_cast<int>(idx.size());
    Mat s(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) s(r, c) = (*this)(idx[r], idx[c]);
    return s;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> a_;
};

using RealMatrix = Mat<double>;
using ComplexMatrix = Mat<cplx>;

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix t(m.cols(), m.rows());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) t(c, r) = std::conj(m(r, c));
  return t;
}

template <class T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
  if (a.cols() != b.rows()) throw shape_error("matmul: inner dimensions differ");
  Mat<T> c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline double abs_max(const ComplexMatrix& m) {
  double v = 0.0;
  for (const auto& x : m.data()) v = std::max(v, std::abs(x));
  return v;
}

inline double abs_max(const RealMatrix& m) {
  double v = 0.0;
  for (const auto& x : m.data()) v = std::max(v, std::abs(x));
  return v;
}

inline ComplexMatrix to_complex(const RealMatrix& m) {
  ComplexMatrix c(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int col = 0; col < m.cols(); ++col) c(r, col) = cplx(m(r, col), 0.0);
  return c;
}

}  // namespace macrocap
