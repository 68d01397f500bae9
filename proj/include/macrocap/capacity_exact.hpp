// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "macrocap/channel.hpp"
#include "macrocap/errors.hpp"
#include "macrocap/matrix.hpp"
#include "macrocap/rng.hpp"
#include "macrocap/specfun.hpp"

namespace macrocap {

struct ExactOptions {
  double degeneracy_gap = 1e-7;  // relative power gap that triggers jitter
  double jitter = 1e-4;          // relative deterministic jitter amplitude
  // Relative floor applied to zero powers. The closed-form cascade loses
  // its footing once link powers span more than ~3 decades, so the floor
  // sits where the phantom path still contributes < 1e-3 bit.
  double zero_floor = 1e-3;
};

struct ExactResult {
  double bits = 0.0;
  bool jittered = false;
};

namespace detail {

inline void require_distinct(const std::vector<double>& p, double gap, const char* what) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t l = i + 1; l < p.size(); ++l)
      if (std::abs(p[i] - p[l]) <= gap * std::max(std::abs(p[i]), std::abs(p[l])))
        throw degeneracy_error(std::string(what) + ": repeated powers at indices " +
                               std::to_string(i) + "," + std::to_string(l));
}

inline void require_nondegenerate(long double x, long double scale, const char* what) {
  if (!(std::abs(static_cast<double>(x)) > 1e-9 * static_cast<double>(scale)))
    throw degeneracy_error(std::string("i_b: vanishing denominator (") + what + ")");
}

// All the per-(i,k,l) constants behind the closed-form I_b, following the
// partial-fraction cascade (theta_1 first, then v_i, then u). Extended
// precision: near-degenerate power layouts push these constants through
// multiple levels of cancellation before they reach the special functions.
struct TwoSourceContext {
  int n = 0;
  double sigma2 = 0.0;
  std::vector<double> p1, p2;
  std::vector<long double> r_prod;  // R_i = 1/(p1_i p2_i)
  std::vector<long double> jac;     // J_i = sigma^2 (1/p2_i - 1/p1_i)
  // Indexed [i][k]:
  std::vector<std::vector<long double>> a, b, q, r, lam, mu;
  // Indexed [i][k][l]:
  std::vector<std::vector<std::vector<long double>>> c, d, xi;

  static TwoSourceContext build(const std::vector<double>& p1, const std::vector<double>& p2,
                                double sigma2) {
    const int n = static_cast<int>(p1.size());
    TwoSourceContext ctx;
    ctx.n = n;
    ctx.sigma2 = sigma2;
    ctx.p1 = p1;
    ctx.p2 = p2;
    ctx.r_prod.resize(n);
    ctx.jac.resize(n);
    const long double s2 = sigma2;
    for (int i = 0; i < n; ++i) {
      const long double q1 = p1[i];
      const long double q2 = p2[i];
      ctx.r_prod[i] = 1.0L / (q1 * q2);
      ctx.jac[i] = s2 * (1.0L / q2 - 1.0L / q1);
      require_nondegenerate(ctx.jac[i], s2 * (1.0L / q2 + 1.0L / q1), "J_i");
    }

    auto grid2 = [n] {
      return std::vector<std::vector<long double>>(n, std::vector<long double>(n, 0.0L));
    };
    ctx.a = grid2();
    ctx.b = grid2();
    ctx.q = grid2();
    ctx.r = grid2();
    ctx.lam = grid2();
    ctx.mu = grid2();

    std::vector<std::vector<long double>> alpha = grid2(), beta = grid2(), gamma = grid2();
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        alpha[i][k] = 1.0L / static_cast<long double>(p2[k]) - 1.0L / static_cast<long double>(p2[i]);
        beta[i][k] = 1.0L / static_cast<long double>(p1[k]) - 1.0L / static_cast<long double>(p1[i]);
        gamma[i][k] = ctx.r_prod[k] - ctx.r_prod[i];
        ctx.a[i][k] = s2 * (alpha[i][k] - beta[i][k]) / ctx.jac[i];
        ctx.b[i][k] =
            (beta[i][k] / static_cast<long double>(p2[i]) - alpha[i][k] / static_cast<long double>(p1[i])) /
            ctx.jac[i];
        require_nondegenerate(
            ctx.a[i][k],
            s2 * (std::abs(static_cast<double>(alpha[i][k])) + std::abs(static_cast<double>(beta[i][k]))) /
                std::abs(static_cast<double>(ctx.jac[i])),
            "a_ik");
        require_nondegenerate(
            ctx.b[i][k],
            (std::abs(static_cast<double>(beta[i][k])) / p2[i] +
             std::abs(static_cast<double>(alpha[i][k])) / p1[i]) /
                std::abs(static_cast<double>(ctx.jac[i])),
            "b_ik");
        ctx.q[i][k] = ctx.b[i][k] / ctx.a[i][k];
        ctx.r[i][k] = gamma[i][k] / ctx.a[i][k];
        ctx.lam[i][k] = 1.0L / (static_cast<long double>(p1[i]) * s2) + ctx.q[i][k];
        ctx.mu[i][k] = 1.0L / (static_cast<long double>(p2[i]) * s2) + ctx.q[i][k];
      }

    auto grid3 = [n] {
      return std::vector<std::vector<std::vector<long double>>>(
          n, std::vector<std::vector<long double>>(n, std::vector<long double>(n, 0.0L)));
    };
    ctx.c = grid3();
    ctx.d = grid3();
    ctx.xi = grid3();
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        for (int l = 0; l < n; ++l) {
          if (l == i || l == k) continue;
          ctx.c[i][k][l] = ctx.b[i][l] * ctx.a[i][k] - ctx.a[i][l] * ctx.b[i][k];
          ctx.d[i][k][l] = ctx.a[i][k] * gamma[i][l] - gamma[i][k] * ctx.a[i][l];
          require_nondegenerate(ctx.c[i][k][l],
                                std::abs(static_cast<double>(ctx.b[i][l] * ctx.a[i][k])) +
                                    std::abs(static_cast<double>(ctx.a[i][l] * ctx.b[i][k])),
                                "c_ikl");
          // d_ikl = 0 puts the u-pole of the M integral on the boundary
          // (the S3/S7 profile structure makes every gamma vanish at once).
          require_nondegenerate(ctx.d[i][k][l],
                                std::abs(static_cast<double>(ctx.a[i][k] * gamma[i][l])) +
                                    std::abs(static_cast<double>(gamma[i][k] * ctx.a[i][l])) +
                                    1e-300,
                                "d_ikl");
        }
        for (int l = 0; l < n; ++l) {
          if (l == i || l == k) continue;
          long double denom = 1.0L;
          for (int z = 0; z < n; ++z) {
            if (z == i || z == k || z == l) continue;
            const long double term =
                ctx.d[i][k][z] * ctx.c[i][k][l] - ctx.c[i][k][z] * ctx.d[i][k][l];
            require_nondegenerate(term,
                                  std::abs(static_cast<double>(ctx.d[i][k][z] * ctx.c[i][k][l])) +
                                      std::abs(static_cast<double>(ctx.c[i][k][z] * ctx.d[i][k][l])) +
                                      1e-300,
                                  "xi denominator");
            denom *= term;
          }
          ctx.xi[i][k][l] = std::pow(ctx.a[i][k] * ctx.c[i][k][l], n - 3) / denom;
        }
      }
    return ctx;
  }
};

}  // namespace detail

// Single-source term: E{ln(1 + h^H h / sigma^2)} for h ~ CN(0, diag(p)),
// in nats. Closed form
//   I_a = sum_i eta_i e^{sigma^2/p_i} E1(sigma^2/p_i),
//   eta_i = p_i^{n_R-1} / prod_{l != i} (p_i - p_l).
inline double i_a(const std::vector<double>& p, double sigma2) {
  if (p.empty()) throw domain_error("i_a: empty power vector");
  if (!(sigma2 > 0.0)) throw domain_error("i_a: sigma^2 must be > 0");
  for (double v : p)
    if (!(v > 0.0)) throw domain_error("i_a: powers must be > 0");
  detail::require_distinct(p, 1e-12, "i_a");

  const int n = static_cast<int>(p.size());
  long double sum = 0.0L;
  for (int i = 0; i < n; ++i) {
    long double denom = 1.0L;
    for (int l = 0; l < n; ++l)
      if (l != i) denom *= static_cast<long double>(p[i]) - static_cast<long double>(p[l]);
    const long double eta = std::pow(static_cast<long double>(p[i]), n - 1) / denom;
    sum += eta * static_cast<long double>(exp_e1(sigma2 / p[i]));
  }
  return static_cast<double>(sum);
}

namespace detail {

// ln-difference kernel shared by the M and N integrals (finite-part form;
// the individual partial-fraction pieces routinely leave the classical
// parameter domain, only their sum is an ordinary integral):
//   group(b) = H1(R_i, b, 1/(p2 s2)) + H1(r_ik, b, lam) -
//              H1(R_i, b, 1/(p1 s2)) - H1(r_ik, b, mu)
inline double h1_group(const TwoSourceContext& ctx, int i, int k, double b) {
  const double s2 = ctx.sigma2;
  const double ri = static_cast<double>(ctx.r_prod[i]);
  const double rik = static_cast<double>(ctx.r[i][k]);
  return h1_pv(ri, b, 1.0 / (ctx.p2[i] * s2)) +
         h1_pv(rik, b, static_cast<double>(ctx.lam[i][k])) -
         h1_pv(ri, b, 1.0 / (ctx.p1[i] * s2)) -
         h1_pv(rik, b, static_cast<double>(ctx.mu[i][k]));
}

inline double h2_group(const TwoSourceContext& ctx, int i, int k, double b) {
  const double s2 = ctx.sigma2;
  const double ri = static_cast<double>(ctx.r_prod[i]);
  const double rik = static_cast<double>(ctx.r[i][k]);
  return h2_pv(ri, b, 1.0 / (ctx.p2[i] * s2)) +
         h2_pv(rik, b, static_cast<double>(ctx.lam[i][k])) -
         h2_pv(ri, b, 1.0 / (ctx.p1[i] * s2)) -
         h2_pv(rik, b, static_cast<double>(ctx.mu[i][k]));
}

// exp_e1 difference quotients against both column poles:
//   p2 s2 [exp_e1(s2/p1) - exp_e1(x)] / (x - s2/p1) -
//   p1 s2 [exp_e1(s2/p2) - exp_e1(x)] / (x - s2/p2), all over n_ikl.
inline long double pole_terms(const TwoSourceContext& ctx, int i, double x,
                              long double n_ikl) {
  const double s2 = ctx.sigma2;
  const long double t1 = static_cast<long double>(ctx.p2[i]) * s2 *
                         static_cast<long double>(exp_e1_pv_diffq(s2 / ctx.p1[i], x));
  const long double t2 = static_cast<long double>(ctx.p1[i]) * s2 *
                         static_cast<long double>(exp_e1_pv_diffq(s2 / ctx.p2[i], x));
  return (t1 - t2) / n_ikl;
}

}  // namespace detail

// Cross term of the two-source capacity (nats): the closed form of the
// double integral
//   I_b = -int int d/dtheta1 [ e^{-s2 t - s2 th2} /
//          prod_i (1 + t p2_i + th1 p1_i p2_i + th2 p1_i) ]_{th1=0} dth2 dt.
inline double i_b(const std::vector<double>& p1, const std::vector<double>& p2,
                  double sigma2) {
  const int n = static_cast<int>(p1.size());
  if (static_cast<int>(p2.size()) != n) throw shape_error("i_b: column length mismatch");
  if (n < 3)
    throw unsupported_error("i_b: closed form requires n_R >= 3 (three distinct indices)");
  if (!(sigma2 > 0.0)) throw domain_error("i_b: sigma^2 must be > 0");
  for (int i = 0; i < n; ++i)
    if (!(p1[i] > 0.0) || !(p2[i] > 0.0)) throw domain_error("i_b: powers must be > 0");
  detail::require_distinct(p1, 1e-12, "i_b p1");
  detail::require_distinct(p2, 1e-12, "i_b p2");

  const detail::TwoSourceContext ctx = detail::TwoSourceContext::build(p1, p2, sigma2);

  long double det_p = 1.0L;
  for (int i = 0; i < n; ++i)
    det_p *= static_cast<long double>(p1[i]) * static_cast<long double>(p2[i]);

  long double total = 0.0L;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      for (int l = 0; l < n; ++l) {
        if (l == i || l == k) continue;
        const long double c = ctx.c[i][k][l];
        const long double d = ctx.d[i][k][l];
        const long double q = ctx.q[i][k];
        const long double eps = d / c;
        const long double n_ikl = ctx.r[i][k] * c - d * q - c * ctx.r_prod[i];
        detail::require_nondegenerate(n_ikl,
                                      std::abs(static_cast<double>(ctx.r[i][k] * c)) +
                                          std::abs(static_cast<double>(d * q)) +
                                          std::abs(static_cast<double>(c * ctx.r_prod[i])),
                                      "n_ikl");
        const long double m_ikl = (ctx.r[i][k] - ctx.r_prod[i]) / q;

        const long double m_tilde =
            (c / (n_ikl * n_ikl)) *
                static_cast<long double>(detail::h1_group(ctx, i, k, static_cast<double>(eps))) +
            detail::pole_terms(ctx, i, static_cast<double>(eps), n_ikl);
        const long double n_tilde =
            (1.0L / (n_ikl * q)) *
                static_cast<long double>(detail::h2_group(ctx, i, k, static_cast<double>(m_ikl))) +
            (c / (n_ikl * n_ikl)) *
                static_cast<long double>(detail::h1_group(ctx, i, k, static_cast<double>(m_ikl))) +
            detail::pole_terms(ctx, i, static_cast<double>(m_ikl), n_ikl);

        total += ctx.xi[i][k][l] * (m_tilde - n_tilde) / ctx.jac[i];
      }
    }
  }
  return static_cast<double>(-total / det_p);
}

namespace detail {

// Deterministic per-entry relative jitter. The factors come from a fixed
// counter stream rather than a linear index ramp: linear ramps leave
// column-proportional layouts degenerate at first order (products like
// p_i1 p_k2 keep matching index sums). The stream key is chosen so that
// entries, pairwise gaps and pairwise sums are all well separated for up
// to 16 entries.
inline RealMatrix jittered_powers(const RealMatrix& p, double delta) {
  RealMatrix out = p;
  for (int i = 0; i < p.rows(); ++i)
    for (int k = 0; k < p.cols(); ++k) {
      const double u =
          2.0 * rng::uniform(3731, static_cast<std::uint64_t>(i) * p.cols() + k) - 1.0;
      out(i, k) = p(i, k) * (1.0 + u * delta);
    }
  return out;
}

inline bool needs_jitter(const RealMatrix& p, double gap) {
  // Repeats within a column break the eta weights; repeats across a row
  // break the Jacobian J_i.
  for (int k = 0; k < p.cols(); ++k)
    for (int i = 0; i < p.rows(); ++i)
      for (int l = i + 1; l < p.rows(); ++l)
        if (std::abs(p(i, k) - p(l, k)) <= gap * std::max(p(i, k), p(l, k))) return true;
  for (int i = 0; i < p.rows(); ++i)
    if (std::abs(p(i, 0) - p(i, 1)) <= gap * std::max(p(i, 0), p(i, 1))) return true;
  return false;
}

inline double two_source_nats(const RealMatrix& p, double sigma2) {
  std::vector<double> c1(p.rows()), c2(p.rows());
  for (int i = 0; i < p.rows(); ++i) {
    c1[i] = p(i, 0);
    c2[i] = p(i, 1);
  }
  return i_a(c1, sigma2) + i_a(c2, sigma2) - i_b(c1, c2, sigma2);
}

}  // namespace detail

// Exact two-source ergodic sum capacity in bits/s/Hz:
//   E{C} = (1/ln 2) (I_{a1} + I_{a2} - I_b).
// Degenerate power layouts (repeated powers, vanishing cascade constants)
// are retried once under a deterministic relative jitter; the result then
// carries an O(jitter) error and the jittered flag.
inline ExactResult exact_capacity_two_source(const PowerMatrix& pm, double sigma2,
                                             const ExactOptions& opts = {}) {
  pm.validate();
  if (pm.n_t() != 2) throw unsupported_error("exact engine requires N = 2");
  if (pm.n_r() < 3) throw unsupported_error("exact engine requires n_R >= 3");
  if (!(sigma2 > 0.0)) throw domain_error("exact engine: sigma^2 must be > 0");

  RealMatrix p = pm.p;
  const double pmax = abs_max(p);
  for (int i = 0; i < p.rows(); ++i)
    for (int k = 0; k < p.cols(); ++k) p(i, k) = std::max(p(i, k), opts.zero_floor * pmax);

  bool jittered = false;
  if (detail::needs_jitter(p, opts.degeneracy_gap)) {
    p = detail::jittered_powers(p, opts.jitter);
    jittered = true;
  }

  const double ln2 = 0.693147180559945309417232121458;
  try {
    return {detail::two_source_nats(p, sigma2) / ln2, jittered};
  } catch (const degeneracy_error&) {
    if (jittered) throw;
    p = detail::jittered_powers(p, opts.jitter);
    return {detail::two_source_nats(p, sigma2) / ln2, true};
  }
}

}  // namespace macrocap
