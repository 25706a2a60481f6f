#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tddsched/scheduler.hpp"
#include "tddsched/traffic.hpp"

namespace tddsched {

struct SimConfig {
  TrafficConfig traffic;
  ChannelConfig channel;
  std::vector<double> tti_set{0.1e-3, 0.2e-3, 0.3e-3, 0.4e-3, 0.5e-3,
                              0.6e-3, 0.7e-3, 0.8e-3, 0.9e-3, 1.0e-3};
  std::optional<double> fixed_tti;
  double tau = 0.05e-3;
  double c_min = 1e-6;
  double rate_unit = 1e8;  // utility is log(1 + rate / rate_unit); order of the cell peak rate
  SolverParams solver;
  double horizon = 10.0;
  double warmup_fraction = 0.1;
  std::vector<std::uint64_t> seeds;
  std::string output_path;
  std::string output_format = "csv";

  void validate() const;
  SchedulerParams scheduler_params() const;
  std::vector<Candidate> candidates() const;
};

struct PacketRecord {
  int service_id = 0;
  int ue = 0;
  double arrival = 0.0;
  double budget = 0.0;
  double completion = 0.0;
  bool completed = false;

  double delay() const { return completion - arrival; }
  bool met() const { return completed && delay() <= budget + 1e-12; }
};

struct TtiRecord {
  double start = 0.0;
  double length = 0.0;
  DuplexMode mode = DuplexMode::DL;
  double utilization = 0.0;  // sum of allocated fractions
};

struct MetricsRecord {
  double measure_start = 0.0;  // warm-up excluded before this time
  double measure_end = 0.0;
  std::vector<PacketRecord> packets;  // MCC packets arriving after warm-up
  std::vector<double> mbb_bits;       // delivered after warm-up, per MBB UE
  std::vector<TtiRecord> ttis;        // every TTI, warm-up included
  std::int64_t unconverged_solves = 0;
};

// Called once per TTI after the decision, before delivery.
using TraceFn = std::function<void(const TtiClock&, const TtiDecision&, std::span<const Service>,
                                   std::span<const double> sinr)>;

// Runs one scenario with one seed. Identical inputs give identical records.
MetricsRecord run(const SimConfig& config, std::uint64_t seed, const TraceFn& trace = {});

// Empirical CDF of completed MCC packet delays at the grid points.
// Throws ValidationError when no packet completed.
std::vector<std::pair<double, double>> delay_cdf(const MetricsRecord& m, std::span<const double> grid);

double min_avg_mbb_throughput(const MetricsRecord& m);

// Share of MCC packets whose delay stayed within budget. Unfinished packets
// count as misses once their deadline has passed by the end of the run.
double deadline_met_fraction(const MetricsRecord& m);

double mean_delay(const MetricsRecord& m);
double median_delay(const MetricsRecord& m);

// Fraction of simulated time spent in UL TTIs.
double ul_time_fraction(const MetricsRecord& m);

// Fraction of TTIs of each length in `tti_set` (same order).
std::vector<double> tti_histogram(const MetricsRecord& m, std::span<const double> tti_set);

}  // namespace tddsched
