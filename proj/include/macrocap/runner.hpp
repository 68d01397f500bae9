// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "macrocap/capacity_approx.hpp"
#include "macrocap/capacity_bounds.hpp"
#include "macrocap/capacity_exact.hpp"
#include "macrocap/channel.hpp"
#include "macrocap/errors.hpp"
#include "macrocap/montecarlo.hpp"

namespace macrocap {

inline constexpr const char* kVersion = "0.1.0";

enum class Engine { exact, approx, bound, lowsnr, highsnr, mc };

inline const char* engine_name(Engine e) {
  switch (e) {
    case Engine::exact: return "exact";
    case Engine::approx: return "approx";
    case Engine::bound: return "bound";
    case Engine::lowsnr: return "lowsnr";
    case Engine::highsnr: return "highsnr";
    case Engine::mc: return "mc";
  }
  return "?";
}

struct RunConfig {
  ScenarioSpec scenario;
  std::vector<Engine> engines;
  std::uint64_t mc_trials = 100000;
  std::uint64_t seed = 1;
  std::optional<CorrelationSpec> correlation;
};

struct RowResult {
  double rho_db = 0.0;
  std::optional<double> exact, approx, jensen, lowsnr, highsnr, mc_mean, mc_stderr;
  bool jittered = false;
  std::vector<std::string> errors;  // "engine: message"
};

struct RunOutput {
  std::vector<RowResult> rows;
  std::string csv;
  nlohmann::json manifest;
  bool had_engine_error = false;
};

namespace detail {

inline RealMatrix json_to_real_matrix(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw config_error(path + ": expected a nonempty array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  RealMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) throw config_error(path + ": ragged rows");
    for (int c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw config_error(path + ": entries must be numbers");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

inline std::vector<ComplexMatrix> json_to_blocks(const nlohmann::json& j,
                                                 const std::string& path) {
  std::vector<ComplexMatrix> blocks;
  if (!j.is_array()) throw config_error(path + ": expected an array of matrices");
  for (std::size_t b = 0; b < j.size(); ++b)
    blocks.push_back(to_complex(json_to_real_matrix(j[b], path + "[" + std::to_string(b) + "]")));
  return blocks;
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig cfg;
  if (!j.is_object()) throw config_error("config: expected a JSON object");
  if (!j.contains("scenario") || !j["scenario"].is_object())
    throw config_error("scenario: required object");
  const auto& s = j["scenario"];
  const std::string kind = s.value("kind", "");
  if (kind == "preset") {
    const std::string id = s.value("id", "");
    const Table1Row& row = table1_row(id);  // throws on unknown id
    ExponentialSpec e;
    e.alphas = {row.alpha1, row.alpha2};
    e.traces = {row.varsigma / (1.0 + row.varsigma), 1.0 / (1.0 + row.varsigma)};
    e.n_r = 3;
    cfg.scenario.model = e;
  } else if (kind == "explicit") {
    ExplicitSpec e;
    e.powers = detail::json_to_real_matrix(s.value("powers", nlohmann::json::array()),
                                           "scenario.powers");
    cfg.scenario.model = e;
  } else if (kind == "exponential") {
    ExponentialSpec e;
    e.alphas = s.value("alphas", std::vector<double>{});
    e.traces = s.value("traces", std::vector<double>{});
    e.n_r = s.value("n_r", 0);
    cfg.scenario.model = e;
  } else if (kind == "random_drop") {
    RandomDropSpec d;
    d.bs_count = s.value("bs_count", d.bs_count);
    d.antennas_per_bs = s.value("antennas_per_bs", d.antennas_per_bs);
    d.user_count = s.value("user_count", d.user_count);
    d.antennas_per_user = s.value("antennas_per_user", d.antennas_per_user);
    d.shadow_sigma_db = s.value("shadow_sigma_db", d.shadow_sigma_db);
    d.pathloss_exponent = s.value("pathloss_exponent", d.pathloss_exponent);
    d.coverage_snr_db = s.value("coverage_snr_db", d.coverage_snr_db);
    d.coverage_quantile = s.value("coverage_quantile", d.coverage_quantile);
    d.drop_seed = s.value("drop_seed", d.drop_seed);
    d.cell_radius = s.value("cell_radius", d.cell_radius);
    d.bs_ring_radius = s.value("bs_ring_radius", d.bs_ring_radius);
    d.min_distance = s.value("min_distance", d.min_distance);
    d.calibration_drops = s.value("calibration_drops", d.calibration_drops);
    cfg.scenario.model = d;
  } else {
    throw config_error("scenario.kind: must be preset | explicit | exponential | random_drop");
  }

  cfg.scenario.rho_db = s.value("rho_db", std::vector<double>{});
  if (j.contains("rho_db")) cfg.scenario.rho_db = j["rho_db"].get<std::vector<double>>();

  if (!j.contains("engines") || !j["engines"].is_array())
    throw config_error("engines: required array");
  for (const auto& e : j["engines"]) {
    const std::string name = e.get<std::string>();
    if (name == "exact") cfg.engines.push_back(Engine::exact);
    else if (name == "approx") cfg.engines.push_back(Engine::approx);
    else if (name == "bound") cfg.engines.push_back(Engine::bound);
    else if (name == "lowsnr") cfg.engines.push_back(Engine::lowsnr);
    else if (name == "highsnr") cfg.engines.push_back(Engine::highsnr);
    else if (name == "mc") cfg.engines.push_back(Engine::mc);
    else throw config_error("engines: unknown engine '" + name + "'");
  }

  cfg.mc_trials = j.value("mc_trials", cfg.mc_trials);
  cfg.seed = j.value("seed", cfg.seed);

  if (j.contains("correlation")) {
    CorrelationSpec c;
    c.receive_blocks =
        detail::json_to_blocks(j["correlation"].value("receive_blocks", nlohmann::json::array()),
                               "correlation.receive_blocks");
    c.transmit_blocks =
        detail::json_to_blocks(j["correlation"].value("transmit_blocks", nlohmann::json::array()),
                               "correlation.transmit_blocks");
    cfg.correlation = std::move(c);
  }
  return cfg;
}

namespace detail {

struct ScenarioDims {
  int n_r = 0;
  int n_t = 0;
};

inline ScenarioDims scenario_dims(const ScenarioSpec& s) {
  ScenarioDims d;
  if (const auto* e = std::get_if<ExplicitSpec>(&s.model)) {
    d.n_r = e->powers.rows();
    d.n_t = e->powers.cols();
  } else if (const auto* e = std::get_if<ExponentialSpec>(&s.model)) {
    d.n_r = e->n_r;
    d.n_t = static_cast<int>(e->alphas.size());
  } else if (const auto* e = std::get_if<RandomDropSpec>(&s.model)) {
    d.n_r = e->bs_count * e->antennas_per_bs;
    d.n_t = e->user_count * e->antennas_per_user;
  }
  return d;
}

}  // namespace detail

// Semantic validation with field-path messages; an empty result means the
// config can run.
inline std::vector<std::string> validate(const RunConfig& cfg) {
  std::vector<std::string> errs;
  const detail::ScenarioDims dims = detail::scenario_dims(cfg.scenario);

  if (const auto* e = std::get_if<ExplicitSpec>(&cfg.scenario.model)) {
    if (e->powers.rows() < 1 || e->powers.cols() < 1)
      errs.push_back("scenario.powers: must be a nonempty matrix");
    bool any = false;
    for (const auto& v : e->powers.data()) {
      if (!std::isfinite(v) || v < 0.0) {
        errs.push_back("scenario.powers: entries must be finite and >= 0");
        break;
      }
      any = any || v > 0.0;
    }
    if (!any) errs.push_back("scenario.powers: needs at least one positive entry");
  } else if (const auto* e = std::get_if<ExponentialSpec>(&cfg.scenario.model)) {
    if (e->alphas.empty() || e->alphas.size() != e->traces.size())
      errs.push_back("scenario.alphas/traces: must be equal-length nonempty lists");
    for (std::size_t i = 0; i < e->alphas.size(); ++i)
      if (!(e->alphas[i] > 0.0))
        errs.push_back("scenario.alphas[" + std::to_string(i) + "]: must be > 0");
    for (std::size_t i = 0; i < e->traces.size(); ++i)
      if (!(e->traces[i] > 0.0))
        errs.push_back("scenario.traces[" + std::to_string(i) + "]: must be > 0");
    if (e->n_r < 1) errs.push_back("scenario.n_r: must be >= 1");
  } else if (const auto* e = std::get_if<RandomDropSpec>(&cfg.scenario.model)) {
    if (e->bs_count < 1 || e->antennas_per_bs < 1 || e->user_count < 1 ||
        e->antennas_per_user < 1)
      errs.push_back("scenario: antenna/user counts must be >= 1");
    if (!(e->shadow_sigma_db >= 0.0)) errs.push_back("scenario.shadow_sigma_db: must be >= 0");
    if (!(e->pathloss_exponent > 0.0))
      errs.push_back("scenario.pathloss_exponent: must be > 0");
    if (!(e->coverage_quantile > 0.0 && e->coverage_quantile < 1.0))
      errs.push_back("scenario.coverage_quantile: must lie in (0,1)");
    if (!(e->cell_radius > 0.0) || !(e->min_distance > 0.0) || !(e->bs_ring_radius >= 0.0))
      errs.push_back("scenario: invalid drop geometry");
    if (e->calibration_drops < 100)
      errs.push_back("scenario.calibration_drops: must be >= 100");
  }

  if (cfg.scenario.rho_db.empty()) errs.push_back("rho_db: must be a nonempty list");
  for (double r : cfg.scenario.rho_db)
    if (!std::isfinite(r)) {
      errs.push_back("rho_db: values must be finite");
      break;
    }

  if (cfg.engines.empty()) errs.push_back("engines: must not be empty");
  for (Engine e : cfg.engines) {
    if (e == Engine::exact) {
      if (dims.n_t != 2) errs.push_back("engines: exact engine requires N=2");
      if (dims.n_r < 3) errs.push_back("engines: exact engine requires n_R>=3");
    }
    if (e == Engine::approx && dims.n_r < dims.n_t)
      errs.push_back("engines: approx engine requires n_R >= N");
    if ((e == Engine::bound || e == Engine::highsnr) &&
        std::min(dims.n_r, dims.n_t) > kBoundSizeLimit)
      errs.push_back("engines: bound permanents limited to min(n_R,N) <= 8");
    if (e == Engine::mc && cfg.mc_trials < 2)
      errs.push_back("mc_trials: must be >= 2");
  }

  if (cfg.correlation) {
    int rt = 0, tt = 0;
    for (const auto& b : cfg.correlation->receive_blocks) {
      if (b.rows() != b.cols()) errs.push_back("correlation.receive_blocks: blocks must be square");
      rt += b.rows();
    }
    for (const auto& b : cfg.correlation->transmit_blocks) {
      if (b.rows() != b.cols())
        errs.push_back("correlation.transmit_blocks: blocks must be square");
      tt += b.rows();
    }
    if (rt != dims.n_r)
      errs.push_back("correlation.receive_blocks: sizes must sum to n_R=" +
                     std::to_string(dims.n_r));
    if (tt != dims.n_t)
      errs.push_back("correlation.transmit_blocks: sizes must sum to N=" +
                     std::to_string(dims.n_t));
  }
  return errs;
}

namespace detail {

inline PowerMatrix materialize(const RunConfig& cfg) {
  PowerMatrix pm;
  if (const auto* e = std::get_if<ExplicitSpec>(&cfg.scenario.model)) {
    pm.p = e->powers;
  } else if (const auto* e = std::get_if<ExponentialSpec>(&cfg.scenario.model)) {
    pm = exponential_profile(e->alphas, e->traces, e->n_r);
  } else if (const auto* e = std::get_if<RandomDropSpec>(&cfg.scenario.model)) {
    pm = random_drop(*e, cfg.seed);
  }
  if (cfg.correlation) pm = apply_correlation(pm, *cfg.correlation);
  pm.validate();
  return pm;
}

inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline std::string csv_field(const std::optional<double>& v) {
  return v ? fmt9(*v) : std::string();
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline int worker_cap() {
  if (const char* env = std::getenv("MACROCAP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  nlohmann::json s;
  if (const auto* e = std::get_if<ExplicitSpec>(&cfg.scenario.model)) {
    s["kind"] = "explicit";
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < e->powers.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < e->powers.cols(); ++c) row.push_back(e->powers(r, c));
      rows.push_back(row);
    }
    s["powers"] = rows;
  } else if (const auto* e = std::get_if<ExponentialSpec>(&cfg.scenario.model)) {
    s["kind"] = "exponential";
    s["alphas"] = e->alphas;
    s["traces"] = e->traces;
    s["n_r"] = e->n_r;
  } else if (const auto* e = std::get_if<RandomDropSpec>(&cfg.scenario.model)) {
    s["kind"] = "random_drop";
    s["bs_count"] = e->bs_count;
    s["antennas_per_bs"] = e->antennas_per_bs;
    s["user_count"] = e->user_count;
    s["antennas_per_user"] = e->antennas_per_user;
    s["shadow_sigma_db"] = e->shadow_sigma_db;
    s["pathloss_exponent"] = e->pathloss_exponent;
    s["coverage_snr_db"] = e->coverage_snr_db;
    s["coverage_quantile"] = e->coverage_quantile;
    s["drop_seed"] = e->drop_seed;
    s["cell_radius"] = e->cell_radius;
    s["bs_ring_radius"] = e->bs_ring_radius;
    s["min_distance"] = e->min_distance;
    s["calibration_drops"] = e->calibration_drops;
  }
  s["rho_db"] = cfg.scenario.rho_db;
  j["scenario"] = s;
  nlohmann::json engines = nlohmann::json::array();
  for (Engine e : cfg.engines) engines.push_back(engine_name(e));
  j["engines"] = engines;
  j["mc_trials"] = cfg.mc_trials;
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace detail

// Run all requested engines over the SNR sweep. Rows are dispatched across
// workers but written in grid order; engine failures become empty-looking
// "nan" sentinels and the run continues.
inline RunOutput run(const RunConfig& cfg) {
  {
    const std::vector<std::string> errs = validate(cfg);
    if (!errs.empty()) {
      std::string msg = "invalid config:";
      for (const auto& e : errs) msg += "\n  " + e;
      throw config_error(msg);
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  const PowerMatrix pm = detail::materialize(cfg);
  const double p_total = pm.total_power();

  auto has = [&](Engine e) {
    for (Engine x : cfg.engines)
      if (x == e) return true;
    return false;
  };

  RunOutput out;
  out.rows.resize(cfg.scenario.rho_db.size());

  auto compute_row = [&](std::size_t idx) {
    RowResult row;
    row.rho_db = cfg.scenario.rho_db[idx];
    const double rho = std::pow(10.0, row.rho_db / 10.0);
    const double sigma2 = p_total / rho;
    const double gamma_bar = 1.0 / sigma2;

    auto guard = [&](Engine e, auto&& fn) {
      try {
        fn();
      } catch (const error& ex) {
        row.errors.push_back(std::string(engine_name(e)) + ": " + ex.what());
      }
    };
    if (has(Engine::exact))
      guard(Engine::exact, [&] {
        const ExactResult r = exact_capacity_two_source(pm, sigma2);
        row.exact = r.bits;
        row.jittered = row.jittered || r.jittered;
      });
    if (has(Engine::approx))
      guard(Engine::approx, [&] { row.approx = approx_capacity(pm, sigma2); });
    if (has(Engine::bound))
      guard(Engine::bound, [&] { row.jensen = jensen_bound(pm, gamma_bar).bound_bits; });
    if (has(Engine::lowsnr))
      guard(Engine::lowsnr, [&] { row.lowsnr = low_snr_approx(pm, gamma_bar); });
    if (has(Engine::highsnr))
      guard(Engine::highsnr, [&] { row.highsnr = high_snr_approx(pm, gamma_bar); });
    if (has(Engine::mc))
      guard(Engine::mc, [&] {
        const McEstimate est = mc_capacity(pm, sigma2, cfg.mc_trials, cfg.seed);
        row.mc_mean = est.mean_bits;
        row.mc_stderr = est.stderr_bits;
      });
    out.rows[idx] = std::move(row);
  };

  const int workers =
      std::min<int>(detail::worker_cap(), static_cast<int>(out.rows.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < out.rows.size(); ++i) compute_row(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < out.rows.size(); i = next.fetch_add(1))
          compute_row(i);
      });
    for (auto& t : pool) t.join();
  }

  // Failed engines print as nan so the CSV stays parseable; absent engines
  // stay empty.
  const double nan = std::nan("");
  for (auto& row : out.rows) {
    for (const auto& msg : row.errors) {
      out.had_engine_error = true;
      const std::string name = msg.substr(0, msg.find(':'));
      if (name == "exact") row.exact = nan;
      if (name == "approx") row.approx = nan;
      if (name == "bound") row.jensen = nan;
      if (name == "lowsnr") row.lowsnr = nan;
      if (name == "highsnr") row.highsnr = nan;
      if (name == "mc") {
        row.mc_mean = nan;
        row.mc_stderr = nan;
      }
    }
  }

  std::string csv =
      "rho_db,exact_bits,approx_bits,jensen_bits,lowsnr_bits,highsnr_bits,mc_bits,mc_stderr\n";
  for (const auto& row : out.rows) {
    csv += detail::fmt9(row.rho_db);
    csv += ',' + detail::csv_field(row.exact);
    csv += ',' + detail::csv_field(row.approx);
    csv += ',' + detail::csv_field(row.jensen);
    csv += ',' + detail::csv_field(row.lowsnr);
    csv += ',' + detail::csv_field(row.highsnr);
    csv += ',' + detail::csv_field(row.mc_mean);
    csv += ',' + detail::csv_field(row.mc_stderr);
    csv += '\n';
  }
  out.csv = std::move(csv);

  const auto t1 = std::chrono::steady_clock::now();
  nlohmann::json manifest;
  {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016" PRIx64,
                  detail::fnv1a64(detail::config_to_json(cfg).dump()));
    manifest["config_hash"] = hash;
  }
  manifest["version"] = kVersion;
  manifest["seed"] = cfg.seed;
  manifest["mc_trials"] = cfg.mc_trials;
  {
    nlohmann::json engines = nlohmann::json::array();
    for (Engine e : cfg.engines) engines.push_back(engine_name(e));
    manifest["engines"] = engines;
  }
  manifest["n_r"] = pm.n_r();
  manifest["n_t"] = pm.n_t();
  manifest["total_power"] = p_total;
  manifest["wall_seconds"] = std::chrono::duration<double>(t1 - t0).count();
  {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    manifest["created_utc"] = buf;
  }
  {
    nlohmann::json jit = nlohmann::json::array();
    nlohmann::json errs = nlohmann::json::array();
    for (const auto& row : out.rows) {
      if (row.jittered) jit.push_back(row.rho_db);
      for (const auto& msg : row.errors) {
        nlohmann::json e;
        e["rho_db"] = row.rho_db;
        e["error"] = msg;
        errs.push_back(e);
      }
    }
    manifest["jittered_rho_db"] = jit;
    manifest["engine_errors"] = errs;
  }
  out.manifest = std::move(manifest);
  return out;
}

}  // namespace macrocap
