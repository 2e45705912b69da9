#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "contraction.hpp"
#include "numerics.hpp"
#include "random.hpp"
#include "solver.hpp"
#include "strategy.hpp"

namespace tww {

struct GridPoint {
  std::size_t n = 0;
  double p = 0.5;
};

struct ExperimentConfig {
  std::vector<GridPoint> grid;
  std::vector<std::string> strategies;  // "greedy", "exact", "paper-schedule"
  std::vector<std::uint64_t> seeds;
  std::size_t exact_cap = 10;
  std::uint64_t exact_budget = 50'000'000;
  std::size_t certificate_cap = 4000;
  double schedule_eps = 0.1;
  double schedule_delta = 0.25;
  double freeze_slack = 1.1;
  unsigned workers = 1;
  std::string output;        // CSV path, empty for none
  std::string sequence_dir;  // where sequences go, empty for none

  void validate() const {
    for (const auto& pt : grid) {
      if (pt.n < 1) throw std::invalid_argument("grid point with n < 1");
      if (!(pt.p >= 0.0 && pt.p <= 1.0)) throw std::invalid_argument("grid point with p outside [0, 1]");
    }
    for (const auto& s : strategies)
      if (s != "greedy" && s != "exact" && s != "paper-schedule") throw std::invalid_argument("unknown strategy '" + s + "'");
    std::set<std::uint64_t> seen;
    for (auto s : seeds)
      if (!seen.insert(s).second) throw std::invalid_argument("duplicate seed " + std::to_string(s));
    if (exact_cap > 64) throw std::invalid_argument("exact_cap above 64");
    if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  }
};

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {"grid", "strategies", "seeds", "exact_cap", "exact_budget", "certificate_cap",
                                              "schedule", "workers", "output", "sequence_dir"};
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  ExperimentConfig c;
  for (const auto& pt : j.value("grid", nlohmann::json::array())) c.grid.push_back({pt.at("n").get<std::size_t>(), pt.at("p").get<double>()});
  c.strategies = j.value("strategies", std::vector<std::string>{});
  c.seeds = j.value("seeds", std::vector<std::uint64_t>{});
  c.exact_cap = j.value("exact_cap", c.exact_cap);
  c.exact_budget = j.value("exact_budget", c.exact_budget);
  c.certificate_cap = j.value("certificate_cap", c.certificate_cap);
  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    for (const auto& [key, value] : s.items())
      if (key != "eps" && key != "delta" && key != "freeze_slack") throw std::invalid_argument("unknown schedule key '" + key + "'");
    c.schedule_eps = s.value("eps", c.schedule_eps);
    c.schedule_delta = s.value("delta", c.schedule_delta);
    c.freeze_slack = s.value("freeze_slack", c.freeze_slack);
  }
  c.workers = j.value("workers", c.workers);
  c.output = j.value("output", std::string{});
  c.sequence_dir = j.value("sequence_dir", std::string{});
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return config_from_json(nlohmann::json::parse(in));
}

struct ExperimentRow {
  std::size_t n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::string strategy;
  std::optional<std::size_t> width;
  std::optional<double> predicted_upper, predicted_lower, certified_lb;
  double runtime_ms = 0.0;
  std::string status;  // ok | inexact | skipped | error
  std::string message;
  std::string sequence_file;
};

inline const char* kExperimentHeader = "n,p,seed,strategy,width,predicted_upper,predicted_lower,certified_lb,runtime_ms,status";

namespace detail {

inline std::string fmt(double x, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>)
    return fmt(*v);
  else
    return std::to_string(*v);
}

inline std::string sequence_name(const ExperimentRow& r) {
  return "n" + std::to_string(r.n) + "_p" + fmt(r.p, "%g") + "_s" + std::to_string(r.seed) + "_" + r.strategy + ".seq";
}

inline void run_trial(const ExperimentConfig& cfg, ExperimentRow& row) {
  auto start = std::chrono::steady_clock::now();
  try {
    if (row.strategy == "exact" && row.n > cfg.exact_cap) {
      row.status = "skipped";
      return;
    }
    const double dn = static_cast<double>(row.n);
    if (row.p > 0.0 && row.p < 1.0 && row.n > 2) {
      row.predicted_upper = predicted_dense_width(dn, row.p).value;
      row.predicted_lower = predicted_lower_dense(dn, row.p, default_slack(dn)).value;
    }
    Trigraph g = gnp({row.n, row.p, row.seed});
    if (row.n <= cfg.certificate_cap && row.predicted_lower && *row.predicted_lower > 0.0 && dn >= default_slack(dn) + 2.0) {
      auto cert = certified_lower_bound(g, default_slack(dn), *row.predicted_lower);
      row.certified_lb = cert.certified_value;
    }
    ContractionSequence seq;
    row.status = "ok";
    if (row.strategy == "greedy") {
      auto r = greedy_sequence(g);
      seq = std::move(r.sequence);
      row.width = r.width;
    } else if (row.strategy == "exact") {
      SolverOptions opt;
      opt.node_budget = cfg.exact_budget;
      auto r = exact_twin_width(g, opt);
      seq = std::move(r.witness);
      row.width = r.value;
      if (!r.exact) row.status = "inexact";
    } else {
      auto params = schedule_params(row.n, row.p, cfg.schedule_eps, cfg.schedule_delta);
      ScheduleOptions so;
      so.freeze_slack = cfg.freeze_slack;
      auto [s, trace] = run_paper_schedule(g, params, so);
      seq = std::move(s);
      row.width = trace.width;
    }
    if (!cfg.sequence_dir.empty()) {
      row.sequence_file = (std::filesystem::path(cfg.sequence_dir) / sequence_name(row)).string();
      write_sequence(row.sequence_file, seq);
    }
  } catch (const std::exception& e) {
    row.status = "error";
    row.message = e.what();
    row.width.reset();
  }
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

// One row per (point, strategy, seed), in that nesting order, whatever the worker count.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.sequence_dir.empty()) std::filesystem::create_directories(cfg.sequence_dir);
  std::vector<ExperimentRow> rows;
  for (const auto& pt : cfg.grid)
    for (const auto& s : cfg.strategies)
      for (auto seed : cfg.seeds) {
        ExperimentRow r;
        r.n = pt.n;
        r.p = pt.p;
        r.seed = seed;
        r.strategy = s;
        rows.push_back(std::move(r));
      }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) detail::run_trial(cfg, rows[i]);
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < cfg.workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  return rows;
}

inline void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, bool with_runtime = true) {
  out << kExperimentHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << detail::fmt(r.p, "%g") << ',' << r.seed << ',' << r.strategy << ',' << detail::opt(r.width) << ','
        << detail::opt(r.predicted_upper) << ',' << detail::opt(r.predicted_lower) << ',' << detail::opt(r.certified_lb) << ','
        << (with_runtime ? detail::fmt(r.runtime_ms, "%.3f") : std::string{}) << ',' << r.status << '\n';
  }
}

}  // namespace tww
