#pragma once

// Dual solver for the per-candidate concave allocation problem
//
//   max_x  V(x)   s.t.  0 <= x_s <= D_s,  sum_s x_s <= X_max
//
// via the closed-form Lagrangian maximiser x*(lambda) and a projected
// subgradient search on the price lambda, plus a grid oracle for testing.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "tddsched/errors.hpp"
#include "tddsched/objective.hpp"

namespace tddsched {

struct SolverParams {
  double step = 1.0;  // constant subgradient step kappa
  int max_iters = 500;
  int grid_points = 64;
  double tol_slack = 1e-6;
  double tol_feas = 1e-6;

  void validate() const {
    if (!(step > 0)) throw ConfigError("solver.step must be > 0");
    if (max_iters < 1) throw ConfigError("solver.max_iters must be >= 1");
    if (grid_points < 2) throw ConfigError("solver.grid_points must be >= 2");
    if (!(tol_slack > 0)) throw ConfigError("solver.tol_slack must be > 0");
    if (!(tol_feas > 0)) throw ConfigError("solver.tol_feas must be > 0");
  }
};

template <typename Scalar = double>
struct AllocationSolution {
  VectorX<Scalar> x;
  Scalar lambda = Scalar(0);
  Scalar value = Scalar(0);
  int iterations = 0;
  Scalar slack_residual = Scalar(0);        // lambda * |X_max - sum x|
  Scalar feasibility_residual = Scalar(0);  // constraint violation, or gap when lambda > 0
  bool converged = true;
};

namespace detail {

template <typename Scalar>
Scalar x_star_component(Scalar lambda, Scalar a, Scalar cost_slope, Scalar cap, Scalar alpha,
                        Scalar beta) {
  if (!(a > Scalar(0)) || !(cap > Scalar(0))) return Scalar(0);
  const Scalar threshold = -beta * cost_slope;
  if (lambda <= threshold) return cap;
  const Scalar v = alpha / (lambda + beta * cost_slope) - Scalar(1) / a;
  return std::clamp(v, Scalar(0), cap);
}

}  // namespace detail

/// Maximiser of the Lagrangian over the box for a fixed price lambda >= 0.
template <typename Scalar, typename DerivedA, typename DerivedB>
VectorX<Scalar> x_star(Scalar lambda, const AllocCoefficients<Scalar>& c,
                       const Eigen::MatrixBase<DerivedA>& alpha,
                       const Eigen::MatrixBase<DerivedB>& beta) {
  VectorX<Scalar> x(c.size());
  for (Eigen::Index s = 0; s < c.size(); ++s) {
    x(s) = detail::x_star_component(lambda, c.rate_slope(s) / c.rate_unit, c.cost_slope(s), c.cap(s),
                                    alpha(s), beta(s));
  }
  return x;
}

/// L(lambda) = V(x*(lambda)) + lambda (X_max - sum x*(lambda)).
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar dual_value(Scalar lambda, const AllocCoefficients<Scalar>& c,
                  const Eigen::MatrixBase<DerivedA>& alpha, const Eigen::MatrixBase<DerivedB>& beta) {
  const VectorX<Scalar> x = x_star(lambda, c, alpha, beta);
  return reduced_utility(x, c, alpha, beta) + lambda * (c.x_max - x.sum());
}

/// Upper end of the price interval: above it no service is scheduled.
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar price_upper_bound(const AllocCoefficients<Scalar>& c, const Eigen::MatrixBase<DerivedA>& alpha,
                         const Eigen::MatrixBase<DerivedB>& beta) {
  if (c.size() == 0) return Scalar(0);
  const auto bound = alpha.array() * c.utility_slope().array() - beta.array() * c.cost_slope.array();
  return std::max(Scalar(0), bound.maxCoeff());
}

/// Solves the allocation problem for one candidate.
///
/// The price is warm-started at the minimiser of L over a uniform grid on
/// [0, price_upper_bound], then moved by the constant-step projected
/// subgradient update lambda <- (lambda - step (X_max - sum x*))^+. Every
/// visited price narrows a bracket around the optimal price (the subgradient
/// changes sign there); once a step leaves the bracket the search finishes by
/// bisection inside it. If the tolerances are still not met the best
/// feasible iterate is returned with `converged == false`.
template <typename Scalar, typename DerivedA, typename DerivedB>
AllocationSolution<Scalar> solve_subproblem(const AllocCoefficients<Scalar>& c,
                                            const Eigen::MatrixBase<DerivedA>& alpha,
                                            const Eigen::MatrixBase<DerivedB>& beta,
                                            const SolverParams& params) {
  params.validate();
  if (c.size() == 0) throw ValidationError("solve_subproblem: no services");
  if (alpha.size() != c.size() || beta.size() != c.size()) {
    throw ValidationError("solve_subproblem: weight vectors do not match coefficient count");
  }

  AllocationSolution<Scalar> sol;
  const Scalar x_max = c.x_max;

  auto finish = [&](Scalar lambda, VectorX<Scalar> x, int iters) {
    const Scalar gap = x_max - x.sum();
    sol.lambda = lambda;
    sol.value = reduced_utility(x, c, alpha, beta);
    sol.x = std::move(x);
    sol.iterations = iters;
    sol.slack_residual = lambda * std::abs(gap);
    sol.feasibility_residual = lambda > Scalar(0) ? std::abs(gap) : std::max(-gap, Scalar(0));
    sol.converged = sol.slack_residual <= params.tol_slack && sol.feasibility_residual <= params.tol_feas;
    return sol;
  };

  // The sum constraint cannot bind: every service can be fully drained.
  if (c.cap.sum() <= Scalar(1)) return finish(Scalar(0), c.cap, 0);

  const Scalar upper = price_upper_bound(c, alpha, beta);
  if (!(upper > Scalar(0))) {
    // Every service is indifferent to its allocation; fill caps in order.
    VectorX<Scalar> x = VectorX<Scalar>::Zero(c.size());
    Scalar room = x_max;
    for (Eigen::Index s = 0; s < c.size() && room > Scalar(0); ++s) {
      x(s) = std::min(c.cap(s), room);
      room -= x(s);
    }
    return finish(Scalar(0), std::move(x), 0);
  }

  auto converged_at = [&](Scalar lambda, Scalar gap) {
    return std::abs(gap) <= params.tol_feas && lambda * std::abs(gap) <= params.tol_slack;
  };

  // Bracket on the price: the subgradient X_max - sum x* is negative below
  // the optimum and positive above it.
  Scalar lo(0);
  Scalar hi = upper;
  auto tighten = [&](Scalar lambda, Scalar gap) {
    if (gap < Scalar(0)) lo = std::max(lo, lambda);
    else if (gap > Scalar(0)) hi = std::min(hi, lambda);
  };

  // Warm start.
  Scalar lambda(0);
  Scalar best_dual = std::numeric_limits<Scalar>::infinity();
  for (int k = 0; k < params.grid_points; ++k) {
    const Scalar l = upper * Scalar(k) / Scalar(params.grid_points - 1);
    const VectorX<Scalar> x = x_star(l, c, alpha, beta);
    const Scalar gap = x_max - x.sum();
    tighten(l, gap);
    const Scalar dual = reduced_utility(x, c, alpha, beta) + l * gap;
    if (dual < best_dual) {
      best_dual = dual;
      lambda = l;
    }
  }

  // Projected subgradient.
  int iters = 0;
  for (; iters < params.max_iters; ++iters) {
    VectorX<Scalar> x = x_star(lambda, c, alpha, beta);
    const Scalar gap = x_max - x.sum();
    if (converged_at(lambda, gap)) return finish(lambda, std::move(x), iters);
    tighten(lambda, gap);
    const Scalar next = std::max(lambda - Scalar(params.step) * gap, Scalar(0));
    if (std::abs(next - lambda) <= Scalar(1e-12)) break;
    if (next <= lo || next >= hi) break;
    lambda = next;
  }

  // Bisection on the bracket.
  for (int b = 0; b < 400; ++b, ++iters) {
    const Scalar mid = lo + (hi - lo) / Scalar(2);
    if (!(mid > lo && mid < hi)) break;
    VectorX<Scalar> x = x_star(mid, c, alpha, beta);
    const Scalar gap = x_max - x.sum();
    if (converged_at(mid, gap)) return finish(mid, std::move(x), iters + 1);
    if (gap < Scalar(0)) lo = mid;
    else hi = mid;
  }

  // The bracket has collapsed onto a price where sum x* jumps; those
  // components are indifferent at this price, so top them up to X_max.
  VectorX<Scalar> x = x_star(hi, c, alpha, beta);
  const VectorX<Scalar> x_low = x_star(lo, c, alpha, beta);
  Scalar room = x_max - x.sum();
  for (Eigen::Index s = 0; s < c.size() && room > Scalar(0); ++s) {
    const Scalar extra = std::min(std::max(x_low(s) - x(s), Scalar(0)), room);
    x(s) += extra;
    room -= extra;
  }
  return finish(hi, std::move(x), iters);
}

template <typename Scalar = double>
struct GridAllocation {
  VectorX<Scalar> x;
  Scalar value = Scalar(0);
};

/// Best point of the grid {0, h, 2h, ...}^S inside the box and under the sum
/// constraint. V is separable, so the search is an exact dynamic program over
/// grid units rather than a loop over every grid point. Refuses S > 5.
template <typename Scalar, typename DerivedA, typename DerivedB>
GridAllocation<Scalar> brute_force_allocate(const AllocCoefficients<Scalar>& c,
                                            const Eigen::MatrixBase<DerivedA>& alpha,
                                            const Eigen::MatrixBase<DerivedB>& beta,
                                            Scalar grid_step) {
  const Eigen::Index n = c.size();
  if (n > 5) throw ValidationError("brute_force_allocate: at most 5 services");
  if (!(grid_step > Scalar(0))) throw ValidationError("brute_force_allocate: grid step must be > 0");

  auto units = [&](Scalar v) {
    return static_cast<int>(std::floor(v / grid_step * (Scalar(1) + Scalar(1e-12))));
  };
  const int total = units(c.x_max);
  const VectorX<Scalar> a = c.utility_slope();

  // best[b]: optimum of the services processed so far using at most b units.
  std::vector<Scalar> best(static_cast<std::size_t>(total) + 1, Scalar(0));
  std::vector<std::vector<int>> choice(static_cast<std::size_t>(n));
  for (Eigen::Index s = 0; s < n; ++s) {
    const int k_max = std::min(units(c.cap(s)), total);
    std::vector<Scalar> term(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
      const Scalar xs = grid_step * Scalar(k);
      term[static_cast<std::size_t>(k)] =
          alpha(s) * std::log1p(a(s) * xs) - beta(s) * (c.cost_intercept(s) + c.cost_slope(s) * xs);
    }
    std::vector<Scalar> next(best.size(), -std::numeric_limits<Scalar>::infinity());
    auto& pick = choice[static_cast<std::size_t>(s)];
    pick.assign(best.size(), 0);
    for (int b = 0; b <= total; ++b) {
      for (int k = 0; k <= std::min(k_max, b); ++k) {
        const Scalar v = best[static_cast<std::size_t>(b - k)] + term[static_cast<std::size_t>(k)];
        if (v > next[static_cast<std::size_t>(b)]) {
          next[static_cast<std::size_t>(b)] = v;
          pick[static_cast<std::size_t>(b)] = k;
        }
      }
    }
    best = std::move(next);
  }

  GridAllocation<Scalar> out;
  out.x = VectorX<Scalar>::Zero(n);
  int b = total;
  for (Eigen::Index s = n - 1; s >= 0; --s) {
    const int k = choice[static_cast<std::size_t>(s)][static_cast<std::size_t>(b)];
    out.x(s) = grid_step * Scalar(k);
    b -= k;
  }
  out.value = reduced_utility(out.x, c, alpha, beta);
  return out;
}

}  // namespace tddsched
