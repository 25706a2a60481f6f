#include "tddsched/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tddsched {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent streams per concern so the channel seed never shifts arrivals.
constexpr std::uint64_t kArrivalStream = 1;
constexpr std::uint64_t kChannelStream = 2;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ stream);
}

}  // namespace

void SimConfig::validate() const {
  traffic.validate();
  channel.validate();
  solver.validate();
  if (tti_set.empty()) throw ConfigError("tti_set must not be empty");
  if (!std::is_sorted(tti_set.begin(), tti_set.end()) ||
      std::adjacent_find(tti_set.begin(), tti_set.end()) != tti_set.end()) {
    throw ConfigError("tti_set must be strictly ascending");
  }
  if (!(tau > 0)) throw ConfigError("tau must be > 0");
  if (!(tti_set.front() > tau)) {
    throw ConfigError("tti_set: shortest TTI must exceed tau (" + std::to_string(tau) + " s)");
  }
  if (fixed_tti && std::find(tti_set.begin(), tti_set.end(), *fixed_tti) == tti_set.end()) {
    throw ConfigError("fixed_tti " + std::to_string(*fixed_tti) + " s is not in tti_set");
  }
  if (!(c_min > 0) || !(c_min < tti_set.front())) {
    throw ConfigError("c_min must satisfy 0 < c_min < shortest TTI");
  }
  if (!(rate_unit > 0)) throw ConfigError("rate_unit must be > 0");
  if (!(horizon >= 0)) throw ConfigError("horizon must be >= 0");
  if (!(warmup_fraction >= 0 && warmup_fraction < 1)) {
    throw ConfigError("warmup_fraction must be in [0, 1)");
  }
}

SchedulerParams SimConfig::scheduler_params() const {
  SchedulerParams p;
  p.objective.c_min = c_min;
  p.objective.rate_unit = rate_unit;
  p.solver = solver;
  p.overhead.tau = tau;
  p.rate.bandwidth = channel.bandwidth;
  return p;
}

std::vector<Candidate> SimConfig::candidates() const { return restrict_tti_set(tti_set, fixed_tti); }

MetricsRecord run(const SimConfig& config, std::uint64_t seed, const TraceFn& trace) {
  config.validate();
  const SchedulerParams params = config.scheduler_params();
  const std::vector<Candidate> candidates = config.candidates();
  const TrafficConfig& traffic = config.traffic;
  const std::uint64_t channel_seed = stream_seed(seed, kChannelStream);
  const double warmup_end = config.warmup_fraction * config.horizon;

  MetricsRecord m;
  m.mbb_bits.assign(static_cast<std::size_t>(traffic.n_mbb), 0.0);
  if (!(config.horizon > 0)) return m;

  const std::vector<MccArrival> arrivals =
      generate_mcc_arrivals(traffic, config.horizon, stream_seed(seed, kArrivalStream));
  std::size_t next_arrival = 0;

  std::vector<Service> live;
  for (int ue = 0; ue < traffic.n_mbb; ++ue) {
    Service s;
    s.id = ue;
    s.ue = ue;
    s.mode = DuplexMode::DL;
    s.service_class = ServiceClass::MBB;
    s.demand = traffic.mbb_chunk_bits;
    s.latency_budget = traffic.mbb_latency_budget;
    s.initial_budget = traffic.mbb_latency_budget;
    s.weights = traffic.mbb_weights;
    s.activation_tti = 0;
    live.push_back(s);
  }
  int next_id = traffic.n_mbb;
  // Packet record slot per live MCC service id (-1 when not measured).
  std::vector<std::ptrdiff_t> record_of;

  TtiClock clock{0, 0.0, 0.0};
  TtiClock previous{-1, 0.0, 0.0};
  bool measuring = false;
  std::vector<double> ue_sinr(static_cast<std::size_t>(traffic.n_mbb + traffic.n_mcc));
  std::vector<double> sinr;

  while (clock.start < config.horizon) {
    // (1) Admit packets that arrived during the previous TTI.
    while (next_arrival < arrivals.size() && arrivals[next_arrival].time < clock.start) {
      const MccArrival& a = arrivals[next_arrival++];
      Service s = admit_service(next_id++, a.ue, a.time, a.bits, a.latency_budget, DuplexMode::UL,
                                ServiceClass::MCC, traffic.mcc_weights, previous);
      update_latency(s, previous);
      record_of.resize(static_cast<std::size_t>(next_id), -1);
      if (a.time >= warmup_end) {
        record_of[static_cast<std::size_t>(s.id)] = static_cast<std::ptrdiff_t>(m.packets.size());
        m.packets.push_back({s.id, s.ue, a.time, a.latency_budget, 0.0, false});
      }
      live.push_back(s);
    }

    // (2) Channel snapshot, (3) best-case rate history.
    for (std::size_t ue = 0; ue < ue_sinr.size(); ++ue) {
      ue_sinr[ue] = sample_sinr(static_cast<int>(ue), clock.index, config.channel, channel_seed);
    }
    sinr.resize(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
      sinr[i] = ue_sinr[static_cast<std::size_t>(live[i].ue)];
      update_best_case_rate(live[i], sinr[i], params.rate);
    }

    // (4) Decide.
    const TtiDecision decision = schedule_tti(live, sinr, candidates, params);
    if (!decision.converged) ++m.unconverged_solves;
    clock.length = decision.tti;
    if (!measuring && clock.start >= warmup_end) {
      measuring = true;
      m.measure_start = clock.start;
    }
    if (trace) trace(clock, decision, live, sinr);

    // (5) Deliver and age every live service.
    double utilization = 0.0;
    for (std::size_t i = 0; i < live.size(); ++i) {
      Service& s = live[i];
      const double p = decision.idle ? 0.0 : decision.allocation[i];
      utilization += p;
      if (p > 0.0) {
        const double rate =
            achievable_rate(s, p, decision.mode, clock.length, sinr[i], params.rate, params.overhead);
        double bits = clock.length * rate;
        // The allocation cap drains the demand exactly up to rounding.
        if (bits > s.demand && bits <= s.demand * (1.0 + 1e-9) + kDemandEpsilon) bits = s.demand;
        update_demand(s, bits);
        if (measuring && s.service_class == ServiceClass::MBB) {
          m.mbb_bits[static_cast<std::size_t>(s.ue)] += bits;
        }
      }
      update_latency(s, clock);
    }

    // (6) Record.
    m.ttis.push_back({clock.start, clock.length, decision.mode, utilization});
    for (const Service& s : live) {
      if (s.service_class != ServiceClass::MCC || !s.complete()) continue;
      const auto slot = record_of[static_cast<std::size_t>(s.id)];
      if (slot >= 0) {
        auto& rec = m.packets[static_cast<std::size_t>(slot)];
        rec.completion = clock.end();
        rec.completed = true;
      }
    }

    // (7) Drop finished packets, refill full buffers.
    std::erase_if(live, [](const Service& s) {
      return s.service_class == ServiceClass::MCC && s.complete();
    });
    for (Service& s : live) {
      if (s.service_class == ServiceClass::MBB && s.complete()) mbb_refill(s, traffic);
    }

    previous = clock;
    clock = TtiClock{clock.index + 1, clock.end(), 0.0};
  }
  m.measure_end = clock.start;
  if (!measuring) m.measure_start = m.measure_end;
  return m;
}

std::vector<std::pair<double, double>> delay_cdf(const MetricsRecord& m, std::span<const double> grid) {
  std::vector<double> delays;
  for (const auto& p : m.packets) {
    if (p.completed) delays.push_back(p.delay());
  }
  if (delays.empty()) throw ValidationError("delay_cdf: no completed MCC packets");
  std::sort(delays.begin(), delays.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  const auto n = static_cast<double>(delays.size());
  for (double g : grid) {
    const auto k = std::upper_bound(delays.begin(), delays.end(), g) - delays.begin();
    out.emplace_back(g, static_cast<double>(k) / n);
  }
  return out;
}

double min_avg_mbb_throughput(const MetricsRecord& m) {
  if (m.mbb_bits.empty()) throw ValidationError("min_avg_mbb_throughput: no MBB UEs");
  const double window = m.measure_end - m.measure_start;
  if (!(window > 0)) return 0.0;
  return *std::min_element(m.mbb_bits.begin(), m.mbb_bits.end()) / window;
}

double deadline_met_fraction(const MetricsRecord& m) {
  std::size_t met = 0;
  std::size_t judged = 0;
  for (const auto& p : m.packets) {
    if (p.completed) {
      ++judged;
      if (p.met()) ++met;
    } else if (m.measure_end - p.arrival > p.budget) {
      ++judged;
    }
  }
  return judged == 0 ? 1.0 : static_cast<double>(met) / static_cast<double>(judged);
}

namespace {

std::vector<double> completed_delays(const MetricsRecord& m) {
  std::vector<double> d;
  for (const auto& p : m.packets) {
    if (p.completed) d.push_back(p.delay());
  }
  return d;
}

}  // namespace

double mean_delay(const MetricsRecord& m) {
  const auto d = completed_delays(m);
  if (d.empty()) return std::nan("");
  return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

double median_delay(const MetricsRecord& m) {
  auto d = completed_delays(m);
  if (d.empty()) return std::nan("");
  std::sort(d.begin(), d.end());
  const std::size_t n = d.size();
  return n % 2 == 1 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
}

double ul_time_fraction(const MetricsRecord& m) {
  double ul = 0.0;
  double total = 0.0;
  for (const auto& t : m.ttis) {
    total += t.length;
    if (t.mode == DuplexMode::UL) ul += t.length;
  }
  return total > 0 ? ul / total : 0.0;
}

std::vector<double> tti_histogram(const MetricsRecord& m, std::span<const double> tti_set) {
  std::vector<double> h(tti_set.size(), 0.0);
  if (m.ttis.empty()) return h;
  for (const auto& t : m.ttis) {
    const auto it = std::find(tti_set.begin(), tti_set.end(), t.length);
    if (it != tti_set.end()) h[static_cast<std::size_t>(it - tti_set.begin())] += 1.0;
  }
  for (double& v : h) v /= static_cast<double>(m.ttis.size());
  return h;
}

}  // namespace tddsched
