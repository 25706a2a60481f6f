#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "tddsched/traffic.hpp"

using namespace tddsched;

TEST_CASE("no arrivals without load") {
  TrafficConfig cfg;
  cfg.eta = 0.0;
  CHECK(generate_mcc_arrivals(cfg, 10.0, 1).empty());
  cfg.eta = 100.0;
  CHECK(generate_mcc_arrivals(cfg, 0.0, 1).empty());
}

TEST_CASE("arrival list shape and determinism") {
  TrafficConfig cfg;
  cfg.eta = 300.0;
  const auto a = generate_mcc_arrivals(cfg, 2.0, 42);
  const auto b = generate_mcc_arrivals(cfg, 2.0, 42);
  REQUIRE(a.size() == b.size());
  std::set<int> ues;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].time == b[i].time);
    CHECK(a[i].ue == b[i].ue);
    CHECK(a[i].time >= 0.0);
    CHECK(a[i].time < 2.0);
    if (i > 0) CHECK(a[i].time >= a[i - 1].time);
    CHECK(a[i].ue >= cfg.n_mbb);
    CHECK(a[i].ue < cfg.n_mbb + cfg.n_mcc);
    CHECK(a[i].bits == 1000.0);
    CHECK(a[i].latency_budget == cfg.mcc_latency_budget);
    ues.insert(a[i].ue);
  }
  CHECK(ues.size() == static_cast<std::size_t>(cfg.n_mcc));
  CHECK(generate_mcc_arrivals(cfg, 2.0, 43).size() != a.size());
}

TEST_CASE("Poisson counts") {
  TrafficConfig cfg;
  cfg.eta = 100.0;
  // Mean count over seeds sits within 3 sigma of eta * horizon.
  const int seeds = 100;
  double total = 0.0;
  for (int seed = 1; seed <= seeds; ++seed) total += static_cast<double>(generate_mcc_arrivals(cfg, 10.0, seed).size());
  const double mean = total / seeds;
  CHECK(std::abs(mean - 1000.0) <= 3.0 * std::sqrt(1000.0 / seeds));

  // Disjoint 1 s windows: variance over mean close to one.
  std::vector<double> counts;
  for (int seed = 1; seed <= 200; ++seed) {
    std::vector<double> w(10, 0.0);
    for (const auto& a : generate_mcc_arrivals(cfg, 10.0, 1000 + seed)) w[static_cast<std::size_t>(a.time)] += 1;
    counts.insert(counts.end(), w.begin(), w.end());
  }
  double m = 0.0;
  for (double c : counts) m += c;
  m /= static_cast<double>(counts.size());
  double v = 0.0;
  for (double c : counts) v += (c - m) * (c - m);
  v /= static_cast<double>(counts.size() - 1);
  CHECK(m == doctest::Approx(100.0).epsilon(0.02));
  CHECK(v / m == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("mbb_refill") {
  TrafficConfig cfg;
  Service s;
  s.id = 7;
  s.service_class = ServiceClass::MBB;
  s.mode = DuplexMode::DL;
  s.demand = 0.0;
  s.latency_budget = 1.2;
  mbb_refill(s, cfg);
  CHECK(s.id == 7);
  CHECK(s.demand == cfg.mbb_chunk_bits);
  CHECK(s.latency_budget == cfg.mbb_latency_budget);

  CHECK_THROWS_AS(mbb_refill(s, cfg), InconsistencyError);  // not drained
  Service mcc;
  mcc.service_class = ServiceClass::MCC;
  CHECK_THROWS_AS(mbb_refill(mcc, cfg), InconsistencyError);
}

TEST_CASE("SINR models") {
  ChannelConfig cfg;
  cfg.model = ChannelModel::Constant;
  cfg.mean_sinr_db = {10.0};
  CHECK(sample_sinr(3, 17, cfg, 1) == doctest::Approx(10.0));

  ChannelConfig flat;
  flat.shadow_std_db = 0.0;
  CHECK(sample_sinr(3, 17, flat, 1) == doctest::Approx(10.0));

  ChannelConfig block;
  block.coherence_ttis = 10;
  for (int ue = 0; ue < 5; ++ue) {
    const double first = sample_sinr(ue, 20, block, 9);
    for (int n = 21; n < 30; ++n) CHECK(sample_sinr(ue, n, block, 9) == first);
    CHECK(sample_sinr(ue, 20, block, 9) == first);
  }
  std::set<double> values;
  double mean_db = 0.0;
  const int draws = 20000;
  for (int k = 0; k < draws; ++k) {
    const double g = sample_sinr(k % 12, (k / 12) * 10, block, 5);
    CHECK(g > 0.0);
    values.insert(g);
    mean_db += 10 * std::log10(g);
  }
  CHECK(values.size() > 19000u);
  CHECK(mean_db / draws == doctest::Approx(10.0).epsilon(0.01));

  ChannelConfig per_ue;
  per_ue.model = ChannelModel::Constant;
  per_ue.mean_sinr_db = {0.0, 20.0};
  CHECK(sample_sinr(1, 0, per_ue, 1) == doctest::Approx(100.0));
  CHECK_THROWS_AS(sample_sinr(2, 0, per_ue, 1), ValidationError);
}

TEST_CASE("traffic and channel validation") {
  TrafficConfig t;
  t.eta = -1;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = TrafficConfig{};
  t.mcc_latency_budget = 0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = TrafficConfig{};
  t.n_mbb = -1;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  ChannelConfig c;
  c.bandwidth = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ChannelConfig{};
  c.coherence_ttis = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
