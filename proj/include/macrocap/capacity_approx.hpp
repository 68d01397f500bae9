// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "macrocap/channel.hpp"
#include "macrocap/combinatorics.hpp"
#include "macrocap/errors.hpp"
#include "macrocap/matrix.hpp"
#include "macrocap/poly.hpp"
#include "macrocap/specfun.hpp"

namespace macrocap {

// E{ |sigma^2 I + Ht^H Ht| } for Ht with independent entries of mean-square
// power q: an exact polynomial identity in the column-subset permanents,
//   sum_{i=0}^{k-1} sum_{cols} Perm(q^{cols_i}) (sigma^2)^{k-1-i}.
inline double numerator_expectation(const RealMatrix& q, double sigma2) {
  const int n_r = q.rows();
  const int km1 = q.cols();  // k-1 columns left of the stream
  if (km1 > n_r) throw shape_error("numerator_expectation: needs cols <= rows");
  double total = 0.0;
  for (int i = 0; i <= km1; ++i) {
    double s = 0.0;
    for (const auto& cols : subset_iter(km1, i)) s += perm_rect(q.select_cols(cols));
    total += s * std::pow(sigma2, km1 - i);
  }
  return total;
}

// Coefficients phi_0..phi_{n_R} of the denominator polynomial
//   sum_l phi_l t^l = |Sigma_k| E{ |sigma^2 I + Ht^H Sigma_k^{-1} Ht| },
// Sigma_k = I + t P_k / sigma^2, built from row-subset permanents of q and
// elementary symmetric functions of the complementary powers:
//   phi_l = sum_i (sigma^2)^{k-l-i-1} sum_rows e_l(p off rows) Perm(q rows).
inline PolyRealCoeffs phi_coeffs(const RealMatrix& q, const std::vector<double>& pk,
                                 double sigma2) {
  const int n_r = q.rows();
  const int km1 = q.cols();
  if (km1 > n_r) throw shape_error("phi_coeffs: needs cols <= rows");
  if (static_cast<int>(pk.size()) != n_r) throw shape_error("phi_coeffs: pk length != rows");
  for (double v : pk)
    if (!(v > 0.0)) throw domain_error("phi_coeffs: powers must be > 0");

  PolyRealCoeffs phi;
  phi.c.assign(static_cast<std::size_t>(n_r) + 1, 0.0);
  for (int i = 0; i <= km1; ++i) {
    // phi_hat[l] = sum over i-row-subsets of Tr_l(P_k complement) Perm(rows)
    std::vector<double> phi_hat(static_cast<std::size_t>(n_r) + 1, 0.0);
    for (const auto& rows : subset_iter(n_r, i)) {
      // Perm of the i x (k-1) row selection; wide, so transpose.
      const double pr = perm_rect(q.select_rows(rows).transposed());
      std::vector<double> comp;
      comp.reserve(n_r - i);
      std::size_t next = 0;
      for (int r = 0; r < n_r; ++r) {
        if (next < rows.size() && rows[next] == r) {
          ++next;
          continue;
        }
        comp.push_back(pk[r]);
      }
      for (int l = 0; l <= n_r - i; ++l) phi_hat[l] += esf(comp, l) * pr;
    }
    for (int l = 0; l <= n_r; ++l)
      phi.c[l] += phi_hat[l] * std::pow(sigma2, km1 - l - i);
  }
  return phi;
}

// A cluster of (near-)coincident denominator roots with its local
// partial-fraction expansion: coeff[j-1] multiplies 1/(t+omega)^j.
struct RootGroup {
  cplx omega;
  int mult = 1;
  std::vector<cplx> coeff;
};

// Everything the per-stream capacity term needs: the denominator roots,
// grouped by multiplicity, and the weights of
//   1/(t prod_g (t+omega_g)^{m_g}) = zeta_0/t + sum_g sum_j c_gj/(t+omega_g)^j.
// For all-simple roots this is the paper-style expansion with
// zeta_l = -c_l1.
struct StreamContext {
  int k = 1;                   // stream index, 1-based
  PolyRealCoeffs phi;          // denominator polynomial
  std::vector<cplx> omega;     // negated roots (with repetition)
  std::vector<RootGroup> groups;
  std::vector<cplx> zeta;      // paper-convention weights when all simple
  cplx zeta0;                  // 1/prod omega
};

namespace detail {

// Taylor coefficients of 1/(t prod_{h != g}(t+omega_h)^{m_h}) around
// t = -omega_g, up to order m_g - 1, by series product and reciprocal.
inline std::vector<cplx> local_expansion(const std::vector<RootGroup>& groups, std::size_t g,
                                         int order) {
  const cplx w = groups[g].omega;
  // series of B(t) = t prod_{h != g} (t + omega_h)^{m_h} in u = t + omega_g
  std::vector<cplx> b{-w, cplx(1.0, 0.0)};  // t = u - omega_g
  b.resize(order + 1, cplx(0.0, 0.0));
  auto mul_linear = [&](cplx c0) {
    // b *= (c0 + u), truncated
    std::vector<cplx> out(order + 1, cplx(0.0, 0.0));
    for (int i = 0; i <= order; ++i) {
      out[i] += b[i] * c0;
      if (i + 1 <= order) out[i + 1] += b[i];
    }
    b = std::move(out);
  };
  for (std::size_t h = 0; h < groups.size(); ++h) {
    if (h == g) continue;
    for (int m = 0; m < groups[h].mult; ++m) mul_linear(groups[h].omega - w);
  }
  // reciprocal series g with b0 g0 = 1
  if (std::abs(b[0]) == 0.0)
    throw degeneracy_error("stream_capacity: degenerate root cluster");
  std::vector<cplx> inv(order + 1, cplx(0.0, 0.0));
  inv[0] = 1.0 / b[0];
  for (int i = 1; i <= order; ++i) {
    cplx acc(0.0, 0.0);
    for (int j = 1; j <= i; ++j) acc += b[j] * inv[i - j];
    inv[i] = -acc / b[0];
  }
  return inv;
}

}  // namespace detail

inline StreamContext build_stream_context(const RealMatrix& q, const std::vector<double>& pk,
                                          double sigma2, int k_index = 1) {
  StreamContext ctx;
  ctx.k = k_index;
  ctx.phi = phi_coeffs(q, pk, sigma2);
  ctx.omega = poly_roots_neg(ctx.phi);

  // Cluster near-coincident roots (repeated powers make the denominator
  // roots exactly repeated; the root finder splits them at roundoff scale)
  // and anchor each group at its centroid.
  const std::size_t n = ctx.omega.size();
  std::vector<bool> used(n, false);
  for (std::size_t l = 0; l < n; ++l) {
    if (used[l]) continue;
    RootGroup grp;
    cplx sum = ctx.omega[l];
    grp.mult = 1;
    used[l] = true;
    for (std::size_t u = l + 1; u < n; ++u) {
      if (used[u]) continue;
      if (std::abs(ctx.omega[u] - ctx.omega[l]) <=
          1e-4 * std::max(std::abs(ctx.omega[l]), std::abs(ctx.omega[u]))) {
        sum += ctx.omega[u];
        ++grp.mult;
        used[u] = true;
      }
    }
    grp.omega = sum / static_cast<double>(grp.mult);
    // realify only well inside the cluster tolerance, so a conjugate pair
    // this close to the axis has already merged into one group
    if (std::abs(grp.omega.imag()) <= 4e-5 * std::abs(grp.omega))
      grp.omega = cplx(grp.omega.real(), 0.0);
    ctx.groups.push_back(std::move(grp));
  }

  for (std::size_t g = 0; g < ctx.groups.size(); ++g) {
    auto& grp = ctx.groups[g];
    grp.coeff = detail::local_expansion(ctx.groups, g, grp.mult - 1);
    // coeff of 1/(t+omega)^j is the series term of order mult - j
    std::reverse(grp.coeff.begin(), grp.coeff.end());
  }

  cplx prod_omega(1.0, 0.0);
  for (const auto& grp : ctx.groups)
    for (int m = 0; m < grp.mult; ++m) prod_omega *= grp.omega;
  ctx.zeta0 = 1.0 / prod_omega;

  bool all_simple = true;
  for (const auto& grp : ctx.groups) all_simple = all_simple && grp.mult == 1;
  if (all_simple) {
    ctx.zeta.reserve(n);
    for (const auto& grp : ctx.groups) ctx.zeta.push_back(-grp.coeff[0]);
  }
  return ctx;
}

// C_k ~= -R sum_g sum_j c_gj F_j(omega_g) with R = phi_0/phi_n and
//   F_1(w) = e^w E1(w),  F_{j+1}(w) = (1/j) w^{-j} - F_j(w)/j;
// for simple roots this is the familiar R sum_l zeta_l e^{omega} E1(omega).
// Conjugate symmetry makes the sum real; a surviving imaginary residue
// means the expansion broke down.
inline double stream_capacity(const StreamContext& ctx) {
  for (const auto& grp : ctx.groups)
    if (!(grp.omega.real() > 0.0))
      throw degeneracy_error(
          "stream_capacity: root with nonpositive real part (approximation breakdown)");

  cplx sum(0.0, 0.0);
  for (const auto& grp : ctx.groups) {
    cplx f = exp_e1(grp.omega);  // F_1
    cplx wpow(1.0, 0.0);
    for (int j = 1; j <= grp.mult; ++j) {
      sum += grp.coeff[j - 1] * f;
      if (j < grp.mult) {
        wpow *= grp.omega;
        f = (1.0 / wpow - f) / static_cast<double>(j);
      }
    }
  }
  const double ratio = ctx.phi.c.front() / ctx.phi.c.back();
  const cplx value = -ratio * sum;
  if (std::abs(value.imag()) > 1e-9 * std::max(1.0, std::abs(value.real())))
    throw degeneracy_error("stream_capacity: imaginary residue exceeds tolerance");
  return value.real();
}

// General-N approximate ergodic sum capacity (bits/s/Hz):
//   E{C} ~= (1/ln 2) sum_k C_k
// with each stream capacity computed against the columns to its left.
// `order` optionally permutes the columns before the chain decomposition.
inline double approx_capacity(const PowerMatrix& pm, double sigma2,
                              const std::vector<int>& order = {}) {
  pm.validate();
  if (!(sigma2 > 0.0)) throw domain_error("approx_capacity: sigma^2 must be > 0");
  const int n_r = pm.n_r();
  const int n_t = pm.n_t();
  if (n_t > n_r)
    throw unsupported_error("approx_capacity: requires n_R >= N");

  std::vector<int> perm(order);
  if (perm.empty()) {
    perm.resize(n_t);
    for (int k = 0; k < n_t; ++k) perm[k] = k;
  }
  if (static_cast<int>(perm.size()) != n_t)
    throw shape_error("approx_capacity: order must permute all columns");

  RealMatrix p = pm.p.select_cols(perm);
  const double pmax = abs_max(p);
  for (int i = 0; i < p.rows(); ++i)
    for (int k = 0; k < p.cols(); ++k) p(i, k) = std::max(p(i, k), 1e-12 * pmax);

  double nats = 0.0;
  for (int k = 1; k <= n_t; ++k) {
    std::vector<int> left(k - 1);
    for (int j = 0; j < k - 1; ++j) left[j] = j;
    const RealMatrix q = p.select_cols(left);
    std::vector<double> pk(n_r);
    for (int i = 0; i < n_r; ++i) pk[i] = p(i, k - 1);
    nats += stream_capacity(build_stream_context(q, pk, sigma2, k));
  }
  return nats / 0.693147180559945309417232121458;
}

}  // namespace macrocap
