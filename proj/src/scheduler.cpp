#include "tddsched/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tddsched {

std::vector<Candidate> restrict_tti_set(std::span<const double> tti_set,
                                        std::optional<double> fixed_tti) {
  if (tti_set.empty()) throw ConfigError("tti_set must not be empty");
  std::vector<double> lengths(tti_set.begin(), tti_set.end());
  std::sort(lengths.begin(), lengths.end());
  if (fixed_tti) {
    if (std::find(lengths.begin(), lengths.end(), *fixed_tti) == lengths.end()) {
      throw ConfigError("fixed_tti " + std::to_string(*fixed_tti) + " s is not in tti_set");
    }
    lengths = {*fixed_tti};
  }
  std::vector<Candidate> out;
  out.reserve(2 * lengths.size());
  for (double l : lengths) {
    out.push_back({DuplexMode::UL, l});
    out.push_back({DuplexMode::DL, l});
  }
  return out;
}

namespace {

struct CandidateOutcome {
  double utility = 0.0;
  std::vector<double> allocation;
  bool converged = true;
};

CandidateOutcome evaluate_candidate(std::span<const Service> services, std::span<const double> sinr,
                                    const Candidate& cand, const SchedulerParams& params) {
  const double psi = effective_payload_ratio(cand.tti, params.overhead);

  std::vector<std::size_t> active;
  std::vector<LinearCoefficients<double>> coeffs;
  CandidateOutcome out;
  out.allocation.assign(services.size(), 0.0);

  // Services in the other direction only age during this TTI.
  double idle_cost = 0.0;
  for (std::size_t i = 0; i < services.size(); ++i) {
    const Service& s = services[i];
    if (s.mode == cand.mode) {
      active.push_back(i);
      const double full_rate = psi * full_band_rate(sinr[i], params.rate);
      coeffs.push_back(linear_coefficients(s.demand, s.latency_budget, full_rate, cand.tti,
                                           s.best_case_rate, params.objective));
    } else {
      idle_cost += s.weights.beta * latency_cost(s.demand, s.latency_budget, 0.0, 0.0, cand.tti,
                                                 s.best_case_rate, params.objective);
    }
  }
  if (active.empty()) {
    out.utility = -idle_cost;
    return out;
  }

  const auto stacked =
      stack_coefficients<double>(coeffs, params.objective.rate_unit);
  VectorX<double> alpha(static_cast<Eigen::Index>(active.size()));
  VectorX<double> beta(alpha.size());
  for (std::size_t k = 0; k < active.size(); ++k) {
    alpha(static_cast<Eigen::Index>(k)) = services[active[k]].weights.alpha;
    beta(static_cast<Eigen::Index>(k)) = services[active[k]].weights.beta;
  }
  const auto sol = solve_subproblem(stacked, alpha, beta, params.solver);
  for (std::size_t k = 0; k < active.size(); ++k) {
    out.allocation[active[k]] = sol.x(static_cast<Eigen::Index>(k));
  }
  out.utility = sol.value - idle_cost;
  out.converged = sol.converged;
  return out;
}

}  // namespace

TtiDecision schedule_tti(std::span<const Service> services, std::span<const double> sinr,
                         std::span<const Candidate> candidates, const SchedulerParams& params) {
  if (candidates.empty()) throw ConfigError("schedule_tti: no candidates");
  if (sinr.size() != services.size()) {
    throw ValidationError("schedule_tti: one SINR value per service required");
  }

  TtiDecision decision;
  if (services.empty()) {
    decision.idle = true;
    decision.mode = params.idle_mode;
    for (const auto& c : candidates) decision.tti = std::max(decision.tti, c.tti);
    return decision;
  }

  bool have_best = false;
  decision.candidates.reserve(candidates.size());
  for (const auto& cand : candidates) {
    auto outcome = evaluate_candidate(services, sinr, cand, params);
    decision.candidates.push_back({cand, outcome.utility, outcome.converged});
    if (!have_best || outcome.utility > decision.utility) {
      have_best = true;
      decision.mode = cand.mode;
      decision.tti = cand.tti;
      decision.utility = outcome.utility;
      decision.allocation = std::move(outcome.allocation);
      decision.converged = outcome.converged;
    }
  }
  return decision;
}

double evaluate_utility(std::span<const Service> services, std::span<const double> sinr,
                        DuplexMode mode, double tti, std::span<const double> allocation,
                        const SchedulerParams& params) {
  double total = 0.0;
  for (std::size_t i = 0; i < services.size(); ++i) {
    const Service& s = services[i];
    const double p = allocation[i];
    const double rate = achievable_rate(s, p, mode, tti, sinr[i], params.rate, params.overhead);
    const double full = achievable_rate(s, 1.0, mode, tti, sinr[i], params.rate, params.overhead);
    const double cost =
        latency_cost(s.demand, s.latency_budget, p, full, tti, s.best_case_rate, params.objective);
    total += s.weights.alpha * throughput_utility(rate, params.objective.rate_unit) -
             s.weights.beta * cost;
  }
  return total;
}

}  // namespace tddsched
