#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tddsched/allocator.hpp"
#include "tddsched/model.hpp"
#include "tddsched/objective.hpp"
#include "tddsched/rate.hpp"

namespace tddsched {

struct SchedulerParams {
  ObjectiveParams objective;
  SolverParams solver;
  OverheadModel overhead;
  RateContext rate;
  DuplexMode idle_mode = DuplexMode::DL;
};

struct Candidate {
  DuplexMode mode = DuplexMode::UL;
  double tti = 0.0;
};

struct CandidateUtility {
  Candidate candidate;
  double utility = 0.0;
  bool converged = true;
};

struct TtiDecision {
  DuplexMode mode = DuplexMode::DL;
  double tti = 0.0;
  std::vector<double> allocation;  // p*_s, aligned with the input services
  double utility = 0.0;
  std::vector<CandidateUtility> candidates;
  bool idle = false;
  bool converged = true;
};

// Candidate (direction, length) pairs: lengths ascending, UL before DL for
// equal length. With `fixed_tti`, only that length is offered; it must belong
// to `tti_set` (ConfigError otherwise).
std::vector<Candidate> restrict_tti_set(std::span<const double> tti_set,
                                        std::optional<double> fixed_tti = std::nullopt);

// Picks the candidate with the highest total utility and its allocation.
// `sinr[i]` belongs to `services[i]`; every service must be eligible, have
// demand left and a positive best-case rate. Ties keep the earlier candidate.
TtiDecision schedule_tti(std::span<const Service> services, std::span<const double> sinr,
                         std::span<const Candidate> candidates, const SchedulerParams& params);

// Total utility of an allocation evaluated directly from the rate and cost
// definitions, without going through the linear coefficients.
double evaluate_utility(std::span<const Service> services, std::span<const double> sinr,
                        DuplexMode mode, double tti, std::span<const double> allocation,
                        const SchedulerParams& params);

}  // namespace tddsched
