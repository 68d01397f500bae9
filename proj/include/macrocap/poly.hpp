// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "macrocap/errors.hpp"
#include "macrocap/matrix.hpp"

namespace macrocap {

// Real-coefficient polynomial c[0] + c[1] t + ... + c[d] t^d.
struct PolyRealCoeffs {
  std::vector<double> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }

  double eval(double t) const {
    double v = 0.0;
    for (int l = degree(); l >= 0; --l) v = v * t + c[l];
    return v;
  }
};

namespace detail {

// Parlett-Reinsch balancing: diagonal similarity with powers of two until
// row and column norms agree. Companion matrices are badly graded without
// it. Hessenberg structure is preserved.
inline void balance(ComplexMatrix& h) {
  const int n = h.rows();
  const double radix = 2.0;
  bool again = true;
  for (int pass = 0; pass < 60 && again; ++pass) {
    again = false;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        r += std::abs(h(i, j));
        c += std::abs(h(j, i));
      }
      if (r == 0.0 || c == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      while (c < r / radix) {
        c *= radix;
        r /= radix;
        f *= radix;
      }
      while (c >= r * radix) {
        c /= radix;
        r *= radix;
        f /= radix;
      }
      if ((c + r) < 0.95 * s && f != 1.0) {
        again = true;
        for (int j = 0; j < n; ++j) h(i, j) /= f;
        for (int j = 0; j < n; ++j) h(j, i) *= f;
      }
    }
  }
}

// One shifted-QR eigenvalue pass on a complex upper-Hessenberg matrix.
// Explicit Givens form; fine for the small degrees used here.
inline std::vector<cplx> hessenberg_eigenvalues(ComplexMatrix h) {
  const int n = h.rows();
  std::vector<cplx> eig(n);
  int hi = n - 1;
  int stall = 0;

  auto subdiag_small = [&](int k) {
    const double s = std::abs(h(k - 1, k - 1)) + std::abs(h(k, k));
    return std::abs(h(k, k - 1)) <= 1e-15 * std::max(s, 1e-280);
  };

  int guard = 0;
  while (hi >= 0) {
    if (++guard > 100 * n + 100)
      throw error("hessenberg_eigenvalues: QR iteration failed to converge");
    if (hi == 0) {
      eig[0] = h(0, 0);
      break;
    }
    if (subdiag_small(hi)) {
      eig[hi] = h(hi, hi);
      --hi;
      stall = 0;
      continue;
    }
    int lo = hi;
    while (lo > 0 && !subdiag_small(lo)) --lo;

    // Wilkinson shift from the trailing 2x2 of the active block.
    const cplx a = h(hi - 1, hi - 1);
    const cplx b = h(hi - 1, hi);
    const cplx cc = h(hi, hi - 1);
    const cplx d = h(hi, hi);
    const cplx tr2 = 0.5 * (a + d);
    const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * cc);
    cplx mu = (std::abs(tr2 + disc - d) < std::abs(tr2 - disc - d)) ? tr2 + disc : tr2 - disc;
    if (++stall % 16 == 0) mu = d + cplx(0.75 * std::abs(h(hi, hi - 1)), 0.0);

    for (int j = lo; j <= hi; ++j) h(j, j) -= mu;

    // QR by Givens rotations, then RQ.
    std::vector<double> gc(hi);
    std::vector<cplx> gs(hi);
    for (int k = lo; k < hi; ++k) {
      const cplx x = h(k, k);
      const cplx y = h(k + 1, k);
      const double nrm = std::hypot(std::abs(x), std::abs(y));
      double c;
      cplx s;
      if (nrm == 0.0 || std::abs(y) == 0.0) {
        c = 1.0;
        s = cplx(0.0, 0.0);
      } else if (std::abs(x) == 0.0) {
        c = 0.0;
        s = std::conj(y) / std::abs(y);
      } else {
        c = std::abs(x) / nrm;
        s = (x / std::abs(x)) * std::conj(y) / nrm;
      }
      gc[k] = c;
      gs[k] = s;
      for (int col = k; col <= hi; ++col) {
        const cplx t1 = h(k, col);
        const cplx t2 = h(k + 1, col);
        h(k, col) = c * t1 + s * t2;
        h(k + 1, col) = -std::conj(s) * t1 + c * t2;
      }
    }
    for (int k = lo; k < hi; ++k) {
      const double c = gc[k];
      const cplx s = gs[k];
      const int top = lo;
      for (int row = top; row <= std::min(k + 2, hi); ++row) {
        const cplx t1 = h(row, k);
        const cplx t2 = h(row, k + 1);
        h(row, k) = c * t1 + std::conj(s) * t2;
        h(row, k + 1) = -s * t1 + c * t2;
      }
    }
    for (int j = lo; j <= hi; ++j) h(j, j) += mu;
  }
  return eig;
}

inline cplx poly_eval(const std::vector<double>& c, cplx z) {
  cplx v(0.0, 0.0);
  for (int l = static_cast<int>(c.size()) - 1; l >= 0; --l) v = v * z + c[l];
  return v;
}

inline cplx poly_eval_deriv(const std::vector<double>& c, cplx z) {
  cplx v(0.0, 0.0);
  for (int l = static_cast<int>(c.size()) - 1; l >= 1; --l)
    v = v * z + static_cast<double>(l) * c[l];
  return v;
}

}  // namespace detail

// Roots of p expressed as p(t) = c_d * prod_l (t + omega_l): returns the
// omega_l (i.e. the negated roots). Complex omegas come in conjugate pairs.
inline std::vector<cplx> poly_roots_neg(const PolyRealCoeffs& p) {
  const int d = p.degree();
  if (d < 1) throw domain_error("poly_roots_neg: degree must be >= 1");
  if (p.c[d] == 0.0) throw domain_error("poly_roots_neg: leading coefficient is zero");

  std::vector<double> a(d);
  for (int l = 0; l < d; ++l) a[l] = p.c[l] / p.c[d];

  ComplexMatrix comp(d, d);
  for (int i = 0; i + 1 < d; ++i) comp(i + 1, i) = cplx(1.0, 0.0);
  for (int i = 0; i < d; ++i) comp(i, d - 1) = cplx(-a[i], 0.0);
  detail::balance(comp);

  std::vector<cplx> roots = detail::hessenberg_eigenvalues(comp);

  // Newton polish on the original monic polynomial.
  std::vector<double> monic(a);
  monic.push_back(1.0);
  for (auto& z : roots) {
    for (int it = 0; it < 4; ++it) {
      const cplx pv = detail::poly_eval(monic, z);
      const cplx dv = detail::poly_eval_deriv(monic, z);
      if (std::abs(dv) < 1e-280) break;
      const cplx step = pv / dv;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::abs(z)) break;
    }
  }

  // Real coefficients: snap near-real roots, pair the rest conjugately.
  std::vector<cplx> out;
  std::vector<cplx> pending;
  for (const auto& z : roots) {
    if (std::abs(z.imag()) <= 1e-10 * (1.0 + std::abs(z)))
      out.emplace_back(z.real(), 0.0);
    else
      pending.push_back(z);
  }
  std::vector<bool> used(pending.size(), false);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (used[i] || pending[i].imag() < 0.0) continue;
    std::size_t best = pending.size();
    double bestd = 1e300;
    for (std::size_t j = 0; j < pending.size(); ++j) {
      if (used[j] || j == i || pending[j].imag() > 0.0) continue;
      const double dist = std::abs(pending[i] - std::conj(pending[j]));
      if (dist < bestd) {
        bestd = dist;
        best = j;
      }
    }
    if (best == pending.size()) {
      out.push_back(pending[i]);  // unpaired; keep as computed
      used[i] = true;
      continue;
    }
    const cplx w = 0.5 * (pending[i] + std::conj(pending[best]));
    out.push_back(w);
    out.push_back(std::conj(w));
    used[i] = used[best] = true;
  }
  for (std::size_t i = 0; i < pending.size(); ++i)
    if (!used[i]) out.push_back(pending[i]);

  for (auto& z : out) z = -z;  // omega = -root
  std::sort(out.begin(), out.end(), [](const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

}  // namespace macrocap
