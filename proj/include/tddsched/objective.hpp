#pragma once

// Latency-aware cost, throughput utility, and their reduction to per-service
// linear/affine coefficients for a fixed (direction, TTI length) candidate.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tddsched/errors.hpp"

namespace tddsched {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Stand-in for an infinite cost (service with no rate history).
inline constexpr double kInfiniteCost = 1e18;

struct ObjectiveParams {
  double c_min = 1e-6;    // denominator floor [s]
  double rate_unit = 1.0;  // throughput utility is log(1 + r / rate_unit)
};

/// Cost of leaving `demand` bits with `budget` seconds of slack after one TTI
/// of length `tti` in which the service gets fraction `p` of a band that
/// carries `full_rate` bit/s.
///
/// Returns (remaining / best_rate + (tti - budget)^+) / max(post_budget, c_min)
/// where post_budget = (budget - tti)^+. A service that still has bits but no
/// rate history gets kInfiniteCost.
template <typename Scalar>
Scalar latency_cost(Scalar demand, Scalar budget, Scalar p, Scalar full_rate, Scalar tti,
                    Scalar best_rate, const ObjectiveParams& params) {
  using std::max;
  Scalar remaining = demand - tti * p * full_rate;
  if (remaining < Scalar(0)) remaining = Scalar(0);
  const Scalar post_budget = max(budget - tti, Scalar(0));
  const Scalar overshoot = max(tti - budget, Scalar(0));
  Scalar backlog_time(0);
  if (remaining > Scalar(0)) {
    if (best_rate <= Scalar(0)) return Scalar(kInfiniteCost);
    backlog_time = remaining / best_rate;
  }
  return (backlog_time + overshoot) / max(post_budget, Scalar(params.c_min));
}

/// log(1 + r / rate_unit)
template <typename Scalar>
Scalar throughput_utility(Scalar rate, Scalar rate_unit = Scalar(1)) {
  return std::log1p(rate / rate_unit);
}

// r(x) = rate_slope * x and J(x) = cost_intercept + cost_slope * x on [0, cap].
template <typename Scalar>
struct LinearCoefficients {
  Scalar rate_slope;      // A_s [bit/s]
  Scalar cost_intercept;  // B_s
  Scalar cost_slope;      // C_s, never positive
  Scalar cap;             // D_s, fraction that exactly drains the demand
};

template <typename Scalar>
LinearCoefficients<Scalar> linear_coefficients(Scalar demand, Scalar budget, Scalar full_rate,
                                               Scalar tti, Scalar best_rate,
                                               const ObjectiveParams& params) {
  using std::max;
  if (!(best_rate > Scalar(0))) {
    throw ValidationError("linear_coefficients: best-case rate must be positive");
  }
  const Scalar denom = max(max(budget - tti, Scalar(0)), Scalar(params.c_min));
  const Scalar overshoot = max(tti - budget, Scalar(0));
  LinearCoefficients<Scalar> c;
  c.rate_slope = full_rate;
  c.cost_intercept = (demand / best_rate + overshoot) / denom;
  c.cost_slope = -tti * full_rate / (best_rate * denom);
  c.cap = full_rate > Scalar(0) ? demand / (tti * full_rate) : Scalar(0);
  return c;
}

// Stacked coefficients of all services in one candidate direction.
template <typename Scalar = double>
struct AllocCoefficients {
  VectorX<Scalar> rate_slope;
  VectorX<Scalar> cost_intercept;
  VectorX<Scalar> cost_slope;
  VectorX<Scalar> cap;
  Scalar x_max = Scalar(0);
  Scalar rate_unit = Scalar(1);

  Eigen::Index size() const { return rate_slope.size(); }

  // Slope of the rate inside the utility, i.e. A_s / rate_unit.
  auto utility_slope() const { return rate_slope / rate_unit; }
};

template <typename Scalar>
AllocCoefficients<Scalar> stack_coefficients(std::span<const LinearCoefficients<Scalar>> per_service,
                                             Scalar rate_unit = Scalar(1)) {
  const auto n = static_cast<Eigen::Index>(per_service.size());
  AllocCoefficients<Scalar> out;
  out.rate_slope.resize(n);
  out.cost_intercept.resize(n);
  out.cost_slope.resize(n);
  out.cap.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = per_service[static_cast<std::size_t>(i)];
    out.rate_slope(i) = c.rate_slope;
    out.cost_intercept(i) = c.cost_intercept;
    out.cost_slope(i) = c.cost_slope;
    out.cap(i) = c.cap;
  }
  out.rate_unit = rate_unit;
  out.x_max = std::min(Scalar(1), out.cap.sum());
  return out;
}

/// Sum over services of alpha * log(1 + A x / unit) - beta * (B + C x).
template <typename Scalar, typename DerivedX, typename DerivedA, typename DerivedB>
Scalar reduced_utility(const Eigen::MatrixBase<DerivedX>& x, const AllocCoefficients<Scalar>& c,
                       const Eigen::MatrixBase<DerivedA>& alpha,
                       const Eigen::MatrixBase<DerivedB>& beta) {
  const auto ax = (c.utility_slope().array() * x.array()).log1p();
  const auto cost = c.cost_intercept.array() + c.cost_slope.array() * x.array();
  return (alpha.array() * ax - beta.array() * cost).sum();
}

}  // namespace tddsched
