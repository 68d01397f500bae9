// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "macrocap/errors.hpp"
#include "macrocap/linalg.hpp"
#include "macrocap/matrix.hpp"
#include "macrocap/rng.hpp"

namespace macrocap {

// Average link powers P_ik on a linear scale: row i = receive antenna,
// column k = transmit antenna. The single channel statistic every engine
// consumes.
struct PowerMatrix {
  RealMatrix p;

  int n_r() const { return p.rows(); }
  int n_t() const { return p.cols(); }

  double total_power() const {
    double s = 0.0;
    for (const auto& v : p.data()) s += v;
    return s;
  }

  std::vector<double> column(int k) const {
    std::vector<double> v(p.rows());
    for (int i = 0; i < p.rows(); ++i) v[i] = p(i, k);
    return v;
  }

  void validate() const {
    if (p.rows() < 1 || p.cols() < 1) throw domain_error("PowerMatrix: empty");
    bool any_positive = false;
    for (const auto& v : p.data()) {
      if (!std::isfinite(v) || v < 0.0)
        throw domain_error("PowerMatrix: entries must be finite and >= 0");
      if (v > 0.0) any_positive = true;
    }
    if (!any_positive) throw domain_error("PowerMatrix: all entries are zero");
  }
};

struct ExplicitSpec {
  RealMatrix powers;
};

struct ExponentialSpec {
  std::vector<double> alphas;  // per-user decay parameter, > 0
  std::vector<double> traces;  // per-user column trace, > 0
  int n_r = 3;
};

struct RandomDropSpec {
  int bs_count = 3;
  int antennas_per_bs = 1;
  int user_count = 3;
  int antennas_per_user = 1;
  double shadow_sigma_db = 8.0;
  double pathloss_exponent = 3.5;
  double coverage_snr_db = 3.0;      // calibration target for the max-BS SNR
  double coverage_quantile = 0.95;   // fraction of locations meeting the target
  std::uint64_t drop_seed = 1;
  // Geometry (coverage disc of unit radius; base stations on an inner ring).
  double cell_radius = 1.0;
  double bs_ring_radius = 0.6;
  double min_distance = 0.05;
  int calibration_drops = 10000;
};

struct ScenarioSpec {
  std::variant<ExplicitSpec, ExponentialSpec, RandomDropSpec> model;
  std::vector<double> rho_db;  // SNR grid, rho = P_T / sigma^2 in dB
};

// Per-array correlation blocks (Hermitian PSD, unit diagonal). Receive
// blocks partition the rows of P, transmit blocks the columns.
struct CorrelationSpec {
  std::vector<ComplexMatrix> receive_blocks;
  std::vector<ComplexMatrix> transmit_blocks;
};

// Geometric power profile: column k has P_ik = K_k alpha_k^{i-1} with K_k
// chosen so the column sums to traces[k].
inline PowerMatrix exponential_profile(const std::vector<double>& alphas,
                                       const std::vector<double>& traces, int n_r) {
  if (alphas.size() != traces.size() || alphas.empty())
    throw domain_error("exponential_profile: alphas/traces must be same nonzero length");
  if (n_r < 1) throw domain_error("exponential_profile: n_r must be >= 1");
  const int n_t = static_cast<int>(alphas.size());
  PowerMatrix pm{RealMatrix(n_r, n_t)};
  for (int k = 0; k < n_t; ++k) {
    const double a = alphas[k];
    const double tr = traces[k];
    if (!(a > 0.0)) throw domain_error("exponential_profile: alpha must be > 0");
    if (!(tr > 0.0)) throw domain_error("exponential_profile: trace must be > 0");
    double denom = 0.0;
    double pw = 1.0;
    for (int i = 0; i < n_r; ++i) {
      denom += pw;
      pw *= a;
    }
    const double k0 = tr / denom;
    pw = 1.0;
    for (int i = 0; i < n_r; ++i) {
      pm.p(i, k) = k0 * pw;
      pw *= a;
    }
  }
  return pm;
}

struct ScenarioPoint {
  PowerMatrix p;
  double sigma2;
};

struct Table1Row {
  const char* id;
  double alpha1;
  double alpha2;
  double varsigma;  // Tr(P_1) / Tr(P_2)
};

// Two single-antenna users across three receive sites, total power 1.
inline constexpr Table1Row kTable1[] = {
    {"S1", 0.1, 0.1, 1.0},  {"S2", 0.1, 1.0, 1.0},  {"S3", 0.1, 10.0, 1.0},
    {"S4", 1.0, 1.0, 1.0},  {"S5", 0.1, 0.1, 10.0}, {"S6", 0.1, 1.0, 10.0},
    {"S7", 0.1, 10.0, 10.0}, {"S8", 1.0, 0.1, 10.0},
};

inline const Table1Row& table1_row(std::string_view id) {
  for (const auto& row : kTable1)
    if (id == row.id) return row;
  throw domain_error("scenario_table1: unknown id '" + std::string(id) + "'");
}

// Preset scenarios: n_R = 3, N = 2, P_T = Tr(P_1) + Tr(P_2) = 1, and
// sigma^2 = P_T / rho so that rho is the average received SNR.
inline ScenarioPoint scenario_table1(std::string_view id, double rho_db) {
  const Table1Row& row = table1_row(id);
  const double tr1 = row.varsigma / (1.0 + row.varsigma);
  const double tr2 = 1.0 / (1.0 + row.varsigma);
  PowerMatrix pm = exponential_profile({row.alpha1, row.alpha2}, {tr1, tr2}, 3);
  const double rho = std::pow(10.0, rho_db / 10.0);
  return {pm, 1.0 / rho};
}

// Correlated arrays reduce to the independent model with powers scaled by
// the correlation eigenvalues: entry (u,v) becomes lambda_r(u) lambda_t(v) P_uv.
inline PowerMatrix apply_correlation(const PowerMatrix& pm, const CorrelationSpec& corr) {
  pm.validate();
  auto block_eigs = [](const std::vector<ComplexMatrix>& blocks, int expected_total,
                       const char* what) {
    std::vector<double> lam;
    int total = 0;
    for (const auto& b : blocks) {
      if (b.rows() != b.cols()) throw shape_error("apply_correlation: block not square");
      for (int i = 0; i < b.rows(); ++i)
        if (std::abs(b(i, i) - cplx(1.0, 0.0)) > 1e-10)
          throw domain_error(std::string("apply_correlation: ") + what +
                             " block diagonal must be 1");
      EigResult e = hermitian_eig(b);
      for (double v : e.values) {
        if (v < -1e-10)
          throw definiteness_error(std::string("apply_correlation: ") + what +
                                   " block is not PSD");
        lam.push_back(std::max(v, 0.0));
      }
      total += b.rows();
    }
    if (total != expected_total)
      throw shape_error(std::string("apply_correlation: ") + what +
                        " blocks do not partition the power matrix");
    return lam;
  };

  const std::vector<double> lr = block_eigs(corr.receive_blocks, pm.n_r(), "receive");
  const std::vector<double> lt = block_eigs(corr.transmit_blocks, pm.n_t(), "transmit");

  // The reduction assumes iid entries inside each (BS, user) block, i.e.
  // constant power there.
  {
    int r0 = 0;
    for (const auto& rb : corr.receive_blocks) {
      int c0 = 0;
      for (const auto& tb : corr.transmit_blocks) {
        const double ref = pm.p(r0, c0);
        for (int i = 0; i < rb.rows(); ++i)
          for (int j = 0; j < tb.rows(); ++j)
            if (std::abs(pm.p(r0 + i, c0 + j) - ref) > 1e-10 * std::max(1.0, ref))
              throw domain_error(
                  "apply_correlation: powers must be constant within each block");
        c0 += tb.rows();
      }
      r0 += rb.rows();
    }
  }

  PowerMatrix out{RealMatrix(pm.n_r(), pm.n_t())};
  for (int u = 0; u < pm.n_r(); ++u)
    for (int v = 0; v < pm.n_t(); ++v) out.p(u, v) = lr[u] * lt[v] * pm.p(u, v);
  return out;
}

namespace detail {

struct DropGeometry {
  std::vector<double> bs_x, bs_y;
};

inline DropGeometry drop_geometry(const RandomDropSpec& spec) {
  DropGeometry g;
  for (int m = 0; m < spec.bs_count; ++m) {
    const double ang = 6.283185307179586 * m / spec.bs_count;
    g.bs_x.push_back(spec.bs_ring_radius * std::cos(ang));
    g.bs_y.push_back(spec.bs_ring_radius * std::sin(ang));
  }
  return g;
}

inline void validate_drop_spec(const RandomDropSpec& spec) {
  if (spec.bs_count < 1 || spec.antennas_per_bs < 1 || spec.user_count < 1 ||
      spec.antennas_per_user < 1)
    throw domain_error("random_drop: counts must be >= 1");
  if (!(spec.shadow_sigma_db >= 0.0)) throw domain_error("random_drop: sigma_SF must be >= 0");
  if (!(spec.pathloss_exponent > 0.0))
    throw domain_error("random_drop: path-loss exponent must be > 0");
  if (!(spec.coverage_quantile > 0.0 && spec.coverage_quantile < 1.0))
    throw domain_error("random_drop: coverage quantile must lie in (0,1)");
  if (!(spec.cell_radius > 0.0 && spec.bs_ring_radius >= 0.0 && spec.min_distance > 0.0))
    throw domain_error("random_drop: invalid geometry");
}

// Uniform position in the coverage disc.
inline void user_position(std::uint64_t key, std::uint64_t ctr, double radius, double& x,
                          double& y) {
  const auto w = rng::philox2x64(key, ctr);
  const double r = radius * std::sqrt(rng::u01(w[0]));
  const double th = 6.283185307179586 * rng::u01(w[1]);
  x = r * std::cos(th);
  y = r * std::sin(th);
}

// Best per-BS link gain (path loss x shadowing) for one sampled location.
inline double best_bs_gain(const RandomDropSpec& spec, const DropGeometry& geo,
                           std::uint64_t key, std::uint64_t sample) {
  double x, y;
  user_position(key, sample * (spec.bs_count + 1), spec.cell_radius, x, y);
  double best = 0.0;
  for (int m = 0; m < spec.bs_count; ++m) {
    const double d = std::max(std::hypot(x - geo.bs_x[m], y - geo.bs_y[m]), spec.min_distance);
    const double shadow_db =
        spec.shadow_sigma_db *
        rng::normal_pair(key, sample * (spec.bs_count + 1) + 1 + m).g0;
    best = std::max(best, std::pow(d, -spec.pathloss_exponent) *
                              std::pow(10.0, shadow_db / 10.0));
  }
  return best;
}

}  // namespace detail

// Transmit scale such that the max-over-BS received SNR (noise power 1)
// exceeds the coverage target for the requested fraction of locations,
// estimated empirically over `calibration_drops` samples.
inline double calibrate_transmit_scale(const RandomDropSpec& spec, std::uint64_t seed) {
  detail::validate_drop_spec(spec);
  const detail::DropGeometry geo = detail::drop_geometry(spec);
  const std::uint64_t key = rng::derive_key(rng::derive_key(seed, spec.drop_seed), /*tag=*/0xCA11B7A7EULL);
  std::vector<double> gains(spec.calibration_drops);
  for (int s = 0; s < spec.calibration_drops; ++s)
    gains[s] = detail::best_bs_gain(spec, geo, key, static_cast<std::uint64_t>(s));
  std::sort(gains.begin(), gains.end());
  // interpolated order statistic at the (1 - coverage) quantile
  const double pos = (1.0 - spec.coverage_quantile) * (gains.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(lo);
  const double quantile_gain =
      lo + 1 < gains.size() ? (1.0 - w) * gains[lo] + w * gains[lo + 1] : gains[lo];
  const double target = std::pow(10.0, spec.coverage_snr_db / 10.0);
  if (!(quantile_gain > 0.0)) throw domain_error("random_drop: degenerate calibration");
  return target / quantile_gain;
}

// One drop: uniform user positions, log-normal shadowing per link, path
// loss, and the calibrated transmit scale. Deterministic in (spec, seed).
inline PowerMatrix random_drop(const RandomDropSpec& spec, std::uint64_t seed) {
  detail::validate_drop_spec(spec);
  const detail::DropGeometry geo = detail::drop_geometry(spec);
  const double scale = calibrate_transmit_scale(spec, seed);

  const std::uint64_t key_pos = rng::derive_key(rng::derive_key(seed, spec.drop_seed), /*tag=*/1);
  const std::uint64_t key_sf = rng::derive_key(rng::derive_key(seed, spec.drop_seed), /*tag=*/2);

  const int n_r = spec.bs_count * spec.antennas_per_bs;
  const int n_t = spec.user_count * spec.antennas_per_user;
  std::vector<double> ux(spec.user_count), uy(spec.user_count);
  for (int w = 0; w < spec.user_count; ++w)
    detail::user_position(key_pos, static_cast<std::uint64_t>(w), spec.cell_radius, ux[w],
                          uy[w]);

  PowerMatrix pm{RealMatrix(n_r, n_t)};
  for (int i = 0; i < n_r; ++i) {
    const int bs = i / spec.antennas_per_bs;
    for (int k = 0; k < n_t; ++k) {
      const int user = k / spec.antennas_per_user;
      const double d =
          std::max(std::hypot(ux[user] - geo.bs_x[bs], uy[user] - geo.bs_y[bs]),
                   spec.min_distance);
      const double shadow_db =
          spec.shadow_sigma_db *
          rng::normal_pair(key_sf, static_cast<std::uint64_t>(i) * n_t + k).g0;
      pm.p(i, k) =
          scale * std::pow(d, -spec.pathloss_exponent) * std::pow(10.0, shadow_db / 10.0);
    }
  }
  return pm;
}

}  // namespace macrocap
