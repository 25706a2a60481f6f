#include "tddsched/traffic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace tddsched {

void TrafficConfig::validate() const {
  if (n_mbb < 0 || n_mcc < 0) throw ConfigError("traffic: UE counts must be >= 0");
  if (!(eta >= 0)) throw ConfigError("traffic.eta must be >= 0");
  if (eta > 0 && n_mcc == 0) throw ConfigError("traffic.eta > 0 requires n_mcc > 0");
  if (!(mcc_packet_bits > 0)) throw ConfigError("traffic.mcc_packet_bits must be > 0");
  if (!(mcc_latency_budget > 0)) throw ConfigError("traffic.mcc_latency_budget must be > 0");
  if (!(mbb_chunk_bits > 0)) throw ConfigError("traffic.mbb_chunk_bits must be > 0");
  if (!(mbb_latency_budget > 0)) throw ConfigError("traffic.mbb_latency_budget must be > 0");
  for (const Weights& w : {mbb_weights, mcc_weights}) {
    if (!(w.alpha >= 0) || !(w.beta >= 0)) throw ConfigError("traffic: weights must be >= 0");
  }
}

void ChannelConfig::validate() const {
  if (!(bandwidth > 0)) throw ConfigError("channel.bandwidth must be > 0");
  if (mean_sinr_db.empty()) throw ConfigError("channel.mean_sinr_db must not be empty");
  if (!(shadow_std_db >= 0)) throw ConfigError("channel.shadow_std_db must be >= 0");
  if (coherence_ttis < 1) throw ConfigError("channel.coherence_ttis must be >= 1");
}

double ChannelConfig::mean_db(int ue) const {
  if (mean_sinr_db.size() == 1) return mean_sinr_db.front();
  if (ue < 0 || static_cast<std::size_t>(ue) >= mean_sinr_db.size()) {
    throw ValidationError("channel: no mean SINR for UE " + std::to_string(ue));
  }
  return mean_sinr_db[static_cast<std::size_t>(ue)];
}

std::vector<MccArrival> generate_mcc_arrivals(const TrafficConfig& cfg, double horizon,
                                              std::uint64_t seed) {
  std::vector<MccArrival> out;
  if (cfg.eta <= 0 || cfg.n_mcc == 0 || !(horizon > 0)) return out;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(cfg.eta);
  std::uniform_int_distribution<int> pick(0, cfg.n_mcc - 1);
  for (double t = gap(rng); t < horizon; t += gap(rng)) {
    out.push_back({t, cfg.n_mbb + pick(rng), cfg.mcc_packet_bits, cfg.mcc_latency_budget});
  }
  return out;
}

void mbb_refill(Service& s, const TrafficConfig& cfg) {
  if (s.service_class != ServiceClass::MBB) {
    throw InconsistencyError("mbb_refill: service " + std::to_string(s.id) + " is not MBB");
  }
  if (!s.complete()) {
    throw InconsistencyError("mbb_refill: service " + std::to_string(s.id) + " still has demand");
  }
  s.demand = cfg.mbb_chunk_bits;
  s.latency_budget = cfg.mbb_latency_budget;
  s.initial_budget = cfg.mbb_latency_budget;
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform on (0, 1) from the top 53 bits.
double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double sample_sinr(int ue, std::int64_t tti_index, const ChannelConfig& cfg, std::uint64_t seed) {
  double db = cfg.mean_db(ue);
  if (cfg.model == ChannelModel::LognormalBlock && cfg.shadow_std_db > 0) {
    // Counter-based draw keyed on (seed, ue, block); Box-Muller for the shadowing.
    const auto block = static_cast<std::uint64_t>(tti_index / cfg.coherence_ttis);
    const std::uint64_t key = mix64(mix64(seed ^ mix64(static_cast<std::uint64_t>(ue))) ^ block);
    const double u1 = unit_open(mix64(key));
    const double u2 = unit_open(mix64(key ^ 0xD1B54A32D192ED03ull));
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    db += cfg.shadow_std_db * z;
  }
  return std::pow(10.0, db / 10.0);
}

}  // namespace tddsched
