#pragma once

#include <cstdint>
#include <vector>

#include "tddsched/model.hpp"

namespace tddsched {

struct TrafficConfig {
  int n_mbb = 2;                       // full-buffer DL UEs
  int n_mcc = 10;                      // UL UEs with Poisson packet arrivals
  double mcc_packet_bits = 1000.0;     // 125 bytes
  double eta = 100.0;                  // aggregate MCC arrival rate [packet/s]
  double mcc_latency_budget = 1e-3;    // [s]
  double mbb_chunk_bits = 1e6;         // full-buffer refill size
  double mbb_latency_budget = 5.0;     // [s], per chunk
  Weights mbb_weights{1.0, 0.2};
  Weights mcc_weights{0.01, 3.0};

  void validate() const;
};

enum class ChannelModel { Constant, LognormalBlock };

struct ChannelConfig {
  double bandwidth = 10e6;  // [Hz]
  ChannelModel model = ChannelModel::LognormalBlock;
  // Mean SINR per UE; a single entry applies to every UE.
  std::vector<double> mean_sinr_db{10.0};
  double shadow_std_db = 3.0;
  int coherence_ttis = 10;

  void validate() const;
  double mean_db(int ue) const;
};

struct MccArrival {
  double time = 0.0;
  int ue = 0;
  double bits = 0.0;
  double latency_budget = 0.0;
};

// Poisson arrivals with aggregate rate eta on [0, horizon), each assigned to a
// uniformly drawn MCC UE. MCC UEs are numbered after the MBB UEs.
std::vector<MccArrival> generate_mcc_arrivals(const TrafficConfig& cfg, double horizon,
                                              std::uint64_t seed);

// Restarts a drained full-buffer service with a fresh chunk and budget.
void mbb_refill(Service& s, const TrafficConfig& cfg);

// Linear SINR of `ue` during TTI `tti_index`. Stateless: the value depends only
// on (ue, tti_index / coherence_ttis, seed).
double sample_sinr(int ue, std::int64_t tti_index, const ChannelConfig& cfg, std::uint64_t seed);

}  // namespace tddsched
