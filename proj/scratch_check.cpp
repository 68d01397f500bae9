// Scratch diagnostic: closed-form I_b vs 2-D quadrature of the defining
// double integral; also sign diagnostics for the H-function parameters.
#include <cstdio>
#include <vector>

#include "macrocap/capacity_exact.hpp"
#include "macrocap/quadrature.hpp"
#include "macrocap/rng.hpp"

using namespace macrocap;

// I_b = int int e^{-s2(t+th2)} * sum_i [p1_i p2_i/(1+t p2_i+th2 p1_i)]
//       / prod_j (1+t p2_j+th2 p1_j) dth2 dt
static double ib_quadrature(const std::vector<double>& p1, const std::vector<double>& p2,
                            double s2, double tol) {
  const int n = (int)p1.size();
  const double cutoff = 45.0 / s2;
  QuadratureSpec inner{1e-14, tol * 0.1, 4000};
  QuadratureSpec outer{1e-13, tol, 4000};
  auto inner_f = [&](double t) {
    return integrate(
        [&](double th) {
          double prod = 1.0, sum = 0.0;
          for (int i = 0; i < n; ++i) {
            const double g = 1.0 + t * p2[i] + th * p1[i];
            prod *= g;
            sum += p1[i] * p2[i] / g;
          }
          return std::exp(-s2 * (t + th)) * sum / prod;
        },
        0.0, cutoff, inner);
  };
  return integrate(inner_f, 0.0, cutoff, outer);
}

static void check(const std::vector<double>& p1, const std::vector<double>& p2, double s2) {
  double closed = 0, quad = 0;
  const char* err = nullptr;
  std::string msg;
  try {
    closed = i_b(p1, p2, s2);
  } catch (const std::exception& e) {
    err = "closed";
    msg = e.what();
  }
  quad = ib_quadrature(p1, p2, s2, 1e-9);
  if (err) {
    std::printf("FAIL(%s: %s)  quad=%.12g\n", err, msg.c_str(), quad);
    return;
  }
  const double rel = std::abs(closed - quad) / std::max(std::abs(quad), 1e-300);
  std::printf("closed=%.12g quad=%.12g rel=%.3e %s\n", closed, quad, rel,
              rel < 1e-6 ? "OK" : "BAD");
}

int main() {
  std::printf("== fixed configs ==\n");
  check({0.5, 0.3, 0.2}, {0.2, 0.35, 0.45}, 1.0);
  check({1.0, 0.2, 0.04}, {0.03, 0.3, 3.0}, 0.5);
  // S3-like at rho=10dB, with the engine's deterministic jitter applied
  // (the raw profile has all gamma_ik = 0).
  {
    std::vector<double> p1{0.9009009, 0.09009009, 0.009009009};
    std::vector<double> p2{0.004504504, 0.04504504, 0.4504504};
    const double delta = 1e-6;
    for (int i = 0; i < 3; ++i) {
      p1[i] *= 1.0 + (i * 2 + 0) * delta;
      p2[i] *= 1.0 + (i * 2 + 1) * delta;
    }
    check(p1, p2, 0.1);
  }
  check({0.2, 0.5, 0.9, 1.7}, {1.1, 0.33, 0.77, 0.05}, 2.0);

  std::printf("== random configs ==\n");
  const std::uint64_t key = rng::derive_key(42, 7);
  std::uint64_t ctr = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 3 + (trial % 2);
    std::vector<double> p1(n), p2(n);
    for (int i = 0; i < n; ++i) {
      p1[i] = 0.02 + rng::uniform(key, ctr++) * 2.0;
      p2[i] = 0.02 + rng::uniform(key, ctr++) * 2.0;
    }
    const double s2 = 0.05 + rng::uniform(key, ctr++) * 3.0;
    check(p1, p2, s2);
  }
  return 0;
}
