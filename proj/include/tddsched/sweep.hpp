#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tddsched/sim.hpp"

namespace tddsched {

enum class SweepParam { Eta, BetaMcc, LatencyBudget, FixedTti };

std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view name);  // ConfigError when unknown

struct SweepSpec {
  SweepParam parameter = SweepParam::Eta;
  // For FixedTti a value of 0 means the unrestricted (scalable) scheduler.
  std::vector<double> values;
};

// Copy of `base` with the swept parameter set to `value`.
SimConfig apply_sweep_value(const SimConfig& base, SweepParam p, double value);

enum class RowKind { Seed, Aggregate };

struct ResultRow {
  double param_value = 0.0;
  RowKind kind = RowKind::Seed;
  std::optional<std::uint64_t> seed;
  std::vector<double> values;  // one per metric column
  std::vector<double> stdev;   // aggregate rows only
};

struct ResultTable {
  std::string sweep_param = "none";
  std::string config_hash;
  std::vector<std::string> columns;
  std::vector<ResultRow> rows;
};

// Metric column names for a given TTI set.
std::vector<std::string> metric_columns(std::span<const double> tti_set);
std::vector<double> metric_values(const MetricsRecord& m, std::span<const double> tti_set);

// Number of worker threads: TDDSCHED_WORKERS if set, else hardware concurrency.
unsigned worker_count();

struct ScenarioResult {
  ResultTable table;
  std::vector<MetricsRecord> metrics;  // per seed, in config order
};

// All seeds of one scenario: one row per seed plus an aggregate row.
ScenarioResult run_scenario(const SimConfig& config);

// One row per (value, seed), then an aggregate row per value, ordered by value
// then seed regardless of completion order. A failing point is named in the
// thrown error.
ResultTable run_sweep(const SimConfig& config, const SweepSpec& sweep);

}  // namespace tddsched
