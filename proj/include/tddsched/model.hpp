#pragma once

#include <cstdint>
#include <string_view>

#include "tddsched/errors.hpp"

namespace tddsched {

enum class DuplexMode { UL, DL };
enum class ServiceClass { MBB, MCC };

std::string_view to_string(DuplexMode mode);
std::string_view to_string(ServiceClass cls);

// Demand residue below this many bits counts as fully served.
inline constexpr double kDemandEpsilon = 1e-9;

struct Weights {
  double alpha = 0.0;  // throughput utility weight
  double beta = 0.0;   // latency cost weight
};

struct TtiClock {
  std::int64_t index = 0;
  double start = 0.0;   // t_n [s]
  double length = 0.0;  // Delta(n) [s]

  double end() const { return start + length; }
};

// One UL or DL flow. Demand and latency budget evolve per TTI; the
// best-case rate is a running mean maintained by the rate module.
struct Service {
  int id = 0;
  int ue = 0;
  DuplexMode mode = DuplexMode::UL;
  ServiceClass service_class = ServiceClass::MCC;
  double arrival_time = 0.0;    // [s]
  double demand = 0.0;          // remaining bits
  double latency_budget = 0.0;  // remaining time to deadline [s]
  double initial_budget = 0.0;  // budget at admission [s]
  Weights weights;
  double best_case_rate = 0.0;  // running mean of B log2(1+sinr) [bit/s]
  std::int64_t rate_samples = 0;
  std::int64_t activation_tti = 0;  // first TTI index in which it may be served

  bool complete() const { return demand == 0.0; }
  bool eligible(std::int64_t tti_index) const { return tti_index >= activation_tti; }
  bool expired() const { return latency_budget == 0.0; }
};

// Creates a service that arrived during `current`. It becomes schedulable in
// the following TTI. Throws ValidationError for non-positive demand or budget,
// negative weights, or an arrival time outside the current TTI.
Service admit_service(int id, int ue, double arrival_time, double demand, double latency_budget,
                      DuplexMode mode, ServiceClass cls, Weights weights, const TtiClock& current);

// Subtracts the bits delivered in one TTI and snaps sub-epsilon residue to 0.
void update_demand(Service& s, double delivered_bits);

// Ages the latency budget by one elapsed TTI. For the TTI the service arrived
// in, only the part of the interval after arrival is charged.
void update_latency(Service& s, const TtiClock& elapsed);

}  // namespace tddsched
