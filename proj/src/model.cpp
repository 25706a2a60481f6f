#include "tddsched/model.hpp"

#include <algorithm>
#include <string>

namespace tddsched {

std::string_view to_string(DuplexMode mode) { return mode == DuplexMode::UL ? "UL" : "DL"; }

std::string_view to_string(ServiceClass cls) { return cls == ServiceClass::MBB ? "MBB" : "MCC"; }

Service admit_service(int id, int ue, double arrival_time, double demand, double latency_budget,
                      DuplexMode mode, ServiceClass cls, Weights weights, const TtiClock& current) {
  if (!(demand > 0)) throw ValidationError("admit_service: demand must be > 0");
  if (!(latency_budget > 0)) throw ValidationError("admit_service: latency budget must be > 0");
  if (!(weights.alpha >= 0) || !(weights.beta >= 0)) {
    throw ValidationError("admit_service: weights must be >= 0");
  }
  if (arrival_time < current.start || arrival_time >= current.end()) {
    throw ValidationError("admit_service: arrival time " + std::to_string(arrival_time) +
                          " outside current TTI");
  }
  Service s;
  s.id = id;
  s.ue = ue;
  s.mode = mode;
  s.service_class = cls;
  s.arrival_time = arrival_time;
  s.demand = demand;
  s.latency_budget = latency_budget;
  s.initial_budget = latency_budget;
  s.weights = weights;
  s.activation_tti = current.index + 1;
  return s;
}

void update_demand(Service& s, double delivered_bits) {
  if (delivered_bits < 0) throw ValidationError("update_demand: negative delivery");
  if (delivered_bits > s.demand + kDemandEpsilon) {
    throw InconsistencyError("update_demand: delivered " + std::to_string(delivered_bits) +
                             " bits exceeds remaining demand " + std::to_string(s.demand));
  }
  const double left = s.demand - delivered_bits;
  s.demand = left <= kDemandEpsilon ? 0.0 : left;
}

void update_latency(Service& s, const TtiClock& elapsed) {
  const double charged =
      elapsed.index < s.activation_tti ? elapsed.end() - s.arrival_time : elapsed.length;
  s.latency_budget = std::max(s.latency_budget - charged, 0.0);
}

}  // namespace tddsched
