#include "tddsched/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tddsched/config.hpp"

namespace tddsched {

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::Eta: return "eta";
    case SweepParam::BetaMcc: return "beta_mcc";
    case SweepParam::LatencyBudget: return "latency_budget";
    case SweepParam::FixedTti: return "fixed_tti";
  }
  return "?";
}

SweepParam parse_sweep_param(std::string_view name) {
  for (auto p : {SweepParam::Eta, SweepParam::BetaMcc, SweepParam::LatencyBudget, SweepParam::FixedTti}) {
    if (to_string(p) == name) return p;
  }
  throw ConfigError("unknown sweep parameter \"" + std::string(name) +
                    "\" (expected eta, beta_mcc, latency_budget or fixed_tti)");
}

SimConfig apply_sweep_value(const SimConfig& base, SweepParam p, double value) {
  SimConfig c = base;
  switch (p) {
    case SweepParam::Eta: c.traffic.eta = value; break;
    case SweepParam::BetaMcc: c.traffic.mcc_weights.beta = value; break;
    case SweepParam::LatencyBudget: c.traffic.mcc_latency_budget = value; break;
    case SweepParam::FixedTti:
      if (value == 0.0) c.fixed_tti.reset();
      else c.fixed_tti = value;
      break;
  }
  return c;
}

std::vector<std::string> metric_columns(std::span<const double> tti_set) {
  std::vector<std::string> cols{"min_mbb_throughput_bps", "mean_delay_s", "median_delay_s",
                                "deadline_met_fraction", "ul_time_fraction"};
  for (double t : tti_set) {
    std::ostringstream name;
    name << "tti_share_" << std::llround(t * 1e6) << "us";
    cols.push_back(name.str());
  }
  cols.push_back("unconverged_solves");
  return cols;
}

std::vector<double> metric_values(const MetricsRecord& m, std::span<const double> tti_set) {
  std::vector<double> v{min_avg_mbb_throughput(m), mean_delay(m), median_delay(m),
                        deadline_met_fraction(m), ul_time_fraction(m)};
  for (double h : tti_histogram(m, tti_set)) v.push_back(h);
  v.push_back(static_cast<double>(m.unconverged_solves));
  return v;
}

unsigned worker_count() {
  if (const char* env = std::getenv("TDDSCHED_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) {
      throw ConfigError("TDDSCHED_WORKERS must be a positive integer");
    }
    return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Job {
  SimConfig config;
  std::uint64_t seed;
  std::string label;
};

// Runs every job on a small thread pool; results land in job order.
std::vector<MetricsRecord> run_jobs(const std::vector<Job>& jobs) {
  std::vector<MetricsRecord> out(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  std::size_t error_index = jobs.size();

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        out[i] = run(jobs[i].config, jobs[i].seed);
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };

  const unsigned n = std::min<std::size_t>(worker_count(), std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep point " + jobs[error_index].label + ": " + e.what());
    }
  }
  return out;
}

ResultRow aggregate(double value, const std::vector<ResultRow>& rows) {
  ResultRow agg;
  agg.param_value = value;
  agg.kind = RowKind::Aggregate;
  const std::size_t cols = rows.front().values.size();
  agg.values.assign(cols, 0.0);
  agg.stdev.assign(cols, 0.0);
  // Seeds without a defined value (e.g. no completed packet) are skipped.
  for (std::size_t c = 0; c < cols; ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
      if (std::isnan(r.values[c])) continue;
      sum += r.values[c];
      ++n;
    }
    if (n == 0) {
      agg.values[c] = agg.stdev[c] = std::nan("");
      continue;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& r : rows) {
      if (!std::isnan(r.values[c])) ss += (r.values[c] - mean) * (r.values[c] - mean);
    }
    agg.values[c] = mean;
    agg.stdev[c] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  }
  return agg;
}

std::string seed_label(std::string_view param, double value, std::uint64_t seed) {
  std::ostringstream s;
  s << param << '=' << value << " seed=" << seed;
  return s.str();
}

}  // namespace

ScenarioResult run_scenario(const SimConfig& config) {
  config.validate();
  if (config.seeds.empty()) throw ConfigError("seeds: must not be empty");
  std::vector<Job> jobs;
  for (auto seed : config.seeds) jobs.push_back({config, seed, seed_label("run", 0, seed)});

  ScenarioResult res;
  res.metrics = run_jobs(jobs);
  res.table.config_hash = config_hash(config);
  res.table.columns = metric_columns(config.tti_set);
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    rows.push_back({0.0, RowKind::Seed, jobs[i].seed, metric_values(res.metrics[i], config.tti_set), {}});
  }
  res.table.rows = rows;
  res.table.rows.push_back(aggregate(0.0, rows));
  return res;
}

ResultTable run_sweep(const SimConfig& config, const SweepSpec& sweep) {
  if (sweep.values.empty()) throw ConfigError("sweep: no values given");
  if (config.seeds.empty()) throw ConfigError("seeds: must not be empty");
  const std::string_view name = to_string(sweep.parameter);

  std::vector<Job> jobs;
  for (double v : sweep.values) {
    SimConfig c = apply_sweep_value(config, sweep.parameter, v);
    try {
      c.validate();
    } catch (const std::exception& e) {
      std::ostringstream s;
      s << "sweep value " << name << '=' << v << ": " << e.what();
      throw ConfigError(s.str());
    }
    for (auto seed : config.seeds) jobs.push_back({c, seed, seed_label(name, v, seed)});
  }
  const std::vector<MetricsRecord> metrics = run_jobs(jobs);

  ResultTable table;
  table.sweep_param = std::string(name);
  table.config_hash = config_hash(config);
  table.columns = metric_columns(config.tti_set);
  const std::size_t per_value = config.seeds.size();
  std::vector<ResultRow> aggregates;
  for (std::size_t vi = 0; vi < sweep.values.size(); ++vi) {
    std::vector<ResultRow> rows;
    for (std::size_t k = 0; k < per_value; ++k) {
      const std::size_t i = vi * per_value + k;
      rows.push_back({sweep.values[vi], RowKind::Seed, jobs[i].seed,
                      metric_values(metrics[i], config.tti_set), {}});
    }
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    aggregates.push_back(aggregate(sweep.values[vi], rows));
  }
  table.rows.insert(table.rows.end(), aggregates.begin(), aggregates.end());
  return table;
}

}  // namespace tddsched
