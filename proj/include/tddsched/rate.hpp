#pragma once

#include "tddsched/model.hpp"

namespace tddsched {

// Fixed control-signal duration at the head of every TTI.
struct OverheadModel {
  double tau = 0.05e-3;  // [s]
};

struct RateContext {
  double bandwidth = 10e6;  // [Hz]
};

// (tti - tau) / tti. Throws ConfigError when tti <= tau.
double effective_payload_ratio(double tti, const OverheadModel& overhead);

// B log2(1 + sinr): the rate with the whole band and no control overhead.
double full_band_rate(double sinr, const RateContext& ctx);

// Rate of `s` for resource fraction p in a TTI of length `tti` and direction
// `mode`; zero when the service runs in the other direction.
double achievable_rate(const Service& s, double p, DuplexMode mode, double tti, double sinr,
                       const RateContext& ctx, const OverheadModel& overhead);

// Folds this TTI's full-band rate into the service's running mean and returns it.
double update_best_case_rate(Service& s, double sinr, const RateContext& ctx);

}  // namespace tddsched
