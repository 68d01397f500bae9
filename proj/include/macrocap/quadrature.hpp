// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "macrocap/errors.hpp"

namespace macrocap {

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
inline constexpr double kGk15X[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGk15Wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGk15Wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double& value, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double kron = kGk15Wk[7] * f0;
  double gauss = kGk15Wg[3] * f0;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kGk15X[i];
    const double fs = f(mid + dx) + f(mid - dx);
    kron += kGk15Wk[i] * fs;
    if (i % 2 == 1) gauss += kGk15Wg[i / 2] * fs;
  }
  value = kron * half;
  err = std::abs((kron - gauss) * half);
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration of f over [a, b]: split the
// worst panel until the summed error estimate meets the tolerance.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1)
    throw domain_error("integrate: invalid quadrature spec");
  if (a == b) return 0.0;

  struct Panel {
    double a, b, val, err;
  };
  std::vector<Panel> panels;
  panels.reserve(64);
  double v0, e0;
  detail::gk15(f, a, b, v0, e0);
  panels.push_back({a, b, v0, e0});

  for (int iter = 0; iter < spec.max_subdivisions; ++iter) {
    double total = 0.0, toterr = 0.0;
    for (const auto& p : panels) {
      total += p.val;
      toterr += p.err;
    }
    if (toterr <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) break;

    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[worst].err) worst = i;

    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) break;  // cannot split further
    Panel left{p.a, mid, 0, 0}, right{mid, p.b, 0, 0};
    detail::gk15(f, left.a, left.b, left.val, left.err);
    detail::gk15(f, right.a, right.b, right.val, right.err);
    panels[worst] = left;
    panels.push_back(right);
  }

  double total = 0.0;
  for (const auto& p : panels) total += p.val;
  return total;
}

}  // namespace macrocap
