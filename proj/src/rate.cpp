#include "tddsched/rate.hpp"

#include <cmath>
#include <string>

namespace tddsched {

double effective_payload_ratio(double tti, const OverheadModel& overhead) {
  if (!(tti > overhead.tau)) {
    throw ConfigError("TTI length " + std::to_string(tti) + " s does not exceed control overhead " +
                      std::to_string(overhead.tau) + " s");
  }
  return (tti - overhead.tau) / tti;
}

double full_band_rate(double sinr, const RateContext& ctx) {
  return ctx.bandwidth * std::log2(1.0 + sinr);
}

double achievable_rate(const Service& s, double p, DuplexMode mode, double tti, double sinr,
                       const RateContext& ctx, const OverheadModel& overhead) {
  if (s.mode != mode) return 0.0;
  return effective_payload_ratio(tti, overhead) * p * full_band_rate(sinr, ctx);
}

double update_best_case_rate(Service& s, double sinr, const RateContext& ctx) {
  const double sample = full_band_rate(sinr, ctx);
  ++s.rate_samples;
  s.best_case_rate += (sample - s.best_case_rate) / static_cast<double>(s.rate_samples);
  return s.best_case_rate;
}

}  // namespace tddsched
