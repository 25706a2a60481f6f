#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "tddsched/rate.hpp"

using namespace tddsched;

TEST_CASE("effective_payload_ratio") {
  const OverheadModel o{0.05e-3};
  CHECK(effective_payload_ratio(1.0e-3, o) == doctest::Approx(0.95));
  CHECK(effective_payload_ratio(0.1e-3, o) == doctest::Approx(0.5));
  CHECK_THROWS_AS(effective_payload_ratio(0.05e-3, o), ConfigError);
  CHECK_THROWS_AS(effective_payload_ratio(0.01e-3, o), ConfigError);

  double prev = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double psi = effective_payload_ratio(k * 0.1e-3, o);
    CHECK(psi > prev);
    CHECK(psi <= 1.0);
    prev = psi;
  }
}

TEST_CASE("achievable_rate") {
  const OverheadModel o{0.05e-3};
  const RateContext ctx{10e6};
  Service ul;
  ul.mode = DuplexMode::UL;
  CHECK(achievable_rate(ul, 0.7, DuplexMode::DL, 1e-3, 10.0, ctx, o) == 0.0);
  CHECK(achievable_rate(ul, 0.0, DuplexMode::UL, 1e-3, 10.0, ctx, o) == 0.0);

  // 8e3 bit/s over the full band without overhead: p = 0.25 gives 2e3.
  const RateContext small{1e4};
  const OverheadModel none{1e-15};
  const double g = std::exp2(0.8) - 1.0;
  CHECK(achievable_rate(ul, 0.25, DuplexMode::UL, 1e-3, g, small, none) == doctest::Approx(2e3));

  const double full = full_band_rate(10.0, ctx);
  CHECK(full == doctest::Approx(10e6 * std::log2(11.0)));
  CHECK(achievable_rate(ul, 1.0, DuplexMode::UL, 1e-3, 10.0, ctx, o) == doctest::Approx(0.95 * full));

  for (double p : {0.05, 0.2, 0.5}) {
    const double r1 = achievable_rate(ul, p, DuplexMode::UL, 0.4e-3, 3.0, ctx, o);
    const double r2 = achievable_rate(ul, 2 * p, DuplexMode::UL, 0.4e-3, 3.0, ctx, o);
    CHECK(r2 == doctest::Approx(2 * r1).epsilon(1e-14));
  }
  // Longer TTI, same p and SINR: strictly more rate.
  CHECK(achievable_rate(ul, 0.5, DuplexMode::UL, 0.3e-3, 3.0, ctx, o) <
        achievable_rate(ul, 0.5, DuplexMode::UL, 0.4e-3, 3.0, ctx, o));
}

TEST_CASE("best-case rate is the running mean of full-band rates") {
  const RateContext ctx{1e4};
  Service s;
  CHECK(update_best_case_rate(s, 1.0, ctx) == doctest::Approx(1e4));  // one-point mean
  CHECK(update_best_case_rate(s, 3.0, ctx) == doctest::Approx(1.5e4));

  Service c;
  for (int k = 0; k < 50; ++k) update_best_case_rate(c, 7.0, ctx);
  CHECK(c.best_case_rate == doctest::Approx(ctx.bandwidth * 3.0).epsilon(1e-14));

  // Order of past samples does not matter.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  std::vector<double> g(40);
  for (auto& v : g) v = u(rng);
  Service a;
  Service b;
  for (double v : g) update_best_case_rate(a, v, ctx);
  std::reverse(g.begin(), g.end());
  for (double v : g) update_best_case_rate(b, v, ctx);
  CHECK(a.best_case_rate == doctest::Approx(b.best_case_rate).epsilon(1e-12));
  CHECK(a.best_case_rate >= 0.0);
}
