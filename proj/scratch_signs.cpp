// Which H-function parameters go negative in practice?
#include <cstdio>
#include <vector>

#include "macrocap/capacity_exact.hpp"
#include "macrocap/rng.hpp"

using namespace macrocap;
using detail::TwoSourceContext;

int main() {
  int neg_r = 0, neg_lam = 0, neg_mu = 0, neg_eps = 0, neg_m = 0, total = 0, cfgs = 0;
  int cfg_with_neg_eps = 0, cfg_with_neg_m = 0;
  const std::uint64_t key = rng::derive_key(99, 3);
  std::uint64_t ctr = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const int n = 3 + (trial % 3);
    std::vector<double> p1(n), p2(n);
    for (int i = 0; i < n; ++i) {
      p1[i] = std::pow(10.0, -2.0 + 3.0 * rng::uniform(key, ctr++));
      p2[i] = std::pow(10.0, -2.0 + 3.0 * rng::uniform(key, ctr++));
    }
    const double s2 = std::pow(10.0, -2.0 + 3.0 * rng::uniform(key, ctr++));
    TwoSourceContext ctx;
    try {
      ctx = TwoSourceContext::build(p1, p2, s2);
    } catch (...) {
      continue;
    }
    ++cfgs;
    bool has_neg_eps = false, has_neg_m = false;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        ++total;
        if (ctx.r[i][k] <= 0) ++neg_r;
        if (ctx.lam[i][k] <= 0) ++neg_lam;
        if (ctx.mu[i][k] <= 0) ++neg_mu;
        const double m = (ctx.r[i][k] - ctx.r_prod[i]) / ctx.q[i][k];
        if (m <= 0) {
          ++neg_m;
          has_neg_m = true;
        }
        for (int l = 0; l < n; ++l) {
          if (l == i || l == k) continue;
          const double eps = ctx.d[i][k][l] / ctx.c[i][k][l];
          if (eps <= 0) {
            ++neg_eps;
            has_neg_eps = true;
          }
        }
      }
    if (has_neg_eps) ++cfg_with_neg_eps;
    if (has_neg_m) ++cfg_with_neg_m;
  }
  std::printf("configs=%d pairs=%d  neg r=%d lam=%d mu=%d | eps<0: %d  m<0: %d\n", cfgs,
              total, neg_r, neg_lam, neg_mu, neg_eps, neg_m);
  std::printf("configs with eps<0: %d, with m<0: %d\n", cfg_with_neg_eps, cfg_with_neg_m);
  return 0;
}
