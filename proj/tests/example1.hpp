#pragma once

// Two-service uplink instance used throughout the tests: an MBB flow with
// 1e3 bits and 5 s of budget, and an MCC packet of 2 bits with 0.25 ms left.
// Full-band rates are 1e4 and 8e3 bit/s, which are also the best-case rates.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "tddsched/allocator.hpp"
#include "tddsched/objective.hpp"
#include "tddsched/scheduler.hpp"
#include "tddsched/sim.hpp"

namespace ex1 {

inline constexpr double kDemand[2] = {1e3, 2.0};
inline constexpr double kBudget[2] = {5.0, 0.25e-3};
inline constexpr double kRate[2] = {1e4, 8e3};
inline constexpr double kAlpha[2] = {0.9, 0.85};
inline constexpr double kBeta[2] = {0.1, 0.15};

inline double default_rate_unit() { return tddsched::SimConfig{}.rate_unit; }

inline tddsched::ObjectiveParams objective(double rate_unit = default_rate_unit()) {
  tddsched::ObjectiveParams p;
  p.c_min = 1e-6;
  p.rate_unit = rate_unit;
  return p;
}

inline tddsched::AllocCoefficients<double> coefficients(double tti,
                                                        double rate_unit = default_rate_unit()) {
  std::vector<tddsched::LinearCoefficients<double>> per;
  for (int s = 0; s < 2; ++s) {
    per.push_back(tddsched::linear_coefficients(kDemand[s], kBudget[s], kRate[s], tti, kRate[s],
                                                objective(rate_unit)));
  }
  return tddsched::stack_coefficients<double>(per, rate_unit);
}

inline Eigen::Vector2d alpha() { return {kAlpha[0], kAlpha[1]}; }
inline Eigen::Vector2d beta() { return {kBeta[0], kBeta[1]}; }

// Scheduler-level version. tau is negligible and the bandwidth/SINR pair is
// chosen so that B log2(1 + sinr) hits the full-band rates exactly.
inline constexpr double kBandwidth = 1e4;

inline std::vector<double> sinr() { return {1.0, std::exp2(0.8) - 1.0}; }

inline std::vector<tddsched::Service> services() {
  std::vector<tddsched::Service> out(2);
  for (int s = 0; s < 2; ++s) {
    auto& v = out[static_cast<std::size_t>(s)];
    v.id = s;
    v.ue = s;
    v.mode = tddsched::DuplexMode::UL;
    v.service_class = s == 0 ? tddsched::ServiceClass::MBB : tddsched::ServiceClass::MCC;
    v.demand = kDemand[s];
    v.latency_budget = kBudget[s];
    v.initial_budget = kBudget[s];
    v.weights = {kAlpha[s], kBeta[s]};
    v.best_case_rate = kRate[s];
    v.rate_samples = 1;
  }
  return out;
}

inline tddsched::SchedulerParams scheduler_params(double rate_unit = default_rate_unit()) {
  tddsched::SchedulerParams p;
  p.objective = objective(rate_unit);
  p.overhead.tau = 1e-12;
  p.rate.bandwidth = kBandwidth;
  return p;
}

}  // namespace ex1
