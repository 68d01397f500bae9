// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "macrocap/errors.hpp"
#include "macrocap/matrix.hpp"

namespace macrocap {

// Determinant via LU with partial pivoting. Works for real and complex
// entries; returns 0 on exactly singular input.
template <class T>
T lu_det(Mat<T> a) {
  if (a.rows() != a.cols()) throw shape_error("lu_det: matrix must be square");
  const int n = a.rows();
  if (n == 0) return T{1};
  T det = T{1};
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int r = k + 1; r < n; ++r) {
      const double v = std::abs(a(r, k));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return T{0};
    if (piv != k) {
      for (int c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
      det = -det;
    }
    det *= a(k, k);
    for (int r = k + 1; r < n; ++r) {
      const T f = a(r, k) / a(k, k);
      for (int c = k + 1; c < n; ++c) a(r, c) -= f * a(k, c);
    }
  }
  return det;
}

namespace detail {

// Hermiticity gate: relative to the largest entry, then symmetrize so the
// factorizations below see an exactly Hermitian matrix.
inline ComplexMatrix require_hermitian(const ComplexMatrix& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) throw shape_error("hermitian input must be square");
  const int n = m.rows();
  const double scale = std::max(abs_max(m), 1e-300);
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol * scale)
        throw shape_error("matrix is not Hermitian within tolerance at entry (" +
                          std::to_string(r) + "," + std::to_string(c) + ")");
  ComplexMatrix s(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) s(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
  return s;
}

}  // namespace detail

// ln|M| for Hermitian positive-definite M, via Cholesky.
inline double logdet_hpd(const ComplexMatrix& m) {
  ComplexMatrix a = detail::require_hermitian(m);
  const int n = a.rows();
  double logdet = 0.0;
  for (int j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(a(j, k));
    if (!(d > 0.0))
      throw definiteness_error("logdet_hpd: nonpositive pivot at index " + std::to_string(j));
    logdet += std::log(d);
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      cplx v = a(i, j);
      for (int k = 0; k < j; ++k) v -= a(i, k) * std::conj(a(j, k));
      a(i, j) = v / ljj;
    }
  }
  return logdet;
}

struct EigResult {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // columns match values
};

// Hermitian eigendecomposition by cyclic Jacobi rotations. Plenty for the
// dimensions used here (correlation blocks, oracle checks).
inline EigResult hermitian_eig(const ComplexMatrix& m) {
  ComplexMatrix a = detail::require_hermitian(m);
  const int n = a.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);

  double fro = 0.0;
  for (const auto& x : a.data()) fro += std::norm(x);
  fro = std::sqrt(fro);

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    off = std::sqrt(2.0 * off);
    if (off <= 1e-14 * std::max(fro, 1e-300)) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx g = a(p, q);
        const double ag = std::abs(g);
        if (ag <= 1e-300) continue;
        const cplx phase = g / ag;  // g = |g| e^{i phi}
        const double alpha = a(p, p).real();
        const double beta = a(q, q).real();
        // zeroing condition: |g|(c^2 - s^2) + (beta - alpha) s c = 0,
        // i.e. t^2 - 2 tau t - 1 = 0; take the small root for stability
        const double tau = (beta - alpha) / (2.0 * ag);
        const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Columns: col_p <- c*col_p + s*conj(phase)*col_q,
        //          col_q <- -s*phase*col_p + c*col_q; rows conjugate-symmetric.
        const cplx sp = s * std::conj(phase);
        const cplx sq = s * phase;
        for (int k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp + sp * akq;
          a(k, q) = -sq * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk + sq * aqk;
          a(q, k) = -sp * apk + c * aqk;
        }
        a(p, q) = cplx(0.0, 0.0);
        a(q, p) = cplx(0.0, 0.0);
        a(p, p) = cplx(a(p, p).real(), 0.0);
        a(q, q) = cplx(a(q, q).real(), 0.0);

        for (int k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp + sp * vkq;
          v(k, q) = -sq * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> lam(n);
  for (int i = 0; i < n; ++i) lam[i] = a(i, i).real();
  std::sort(order.begin(), order.end(), [&](int x, int y) { return lam[x] > lam[y]; });

  EigResult res;
  res.values.resize(n);
  res.vectors = ComplexMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    res.values[j] = lam[order[j]];
    for (int i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
  }
  return res;
}

}  // namespace macrocap
