#include "doctest.h"
#include "tddsched/model.hpp"

using namespace tddsched;

namespace {
const TtiClock kFirst{0, 0.0, 1e-3};
}

TEST_CASE("admit_service activates in the next TTI") {
  const auto mcc = admit_service(2, 1, 0.0, 2.0, 0.25e-3, DuplexMode::UL, ServiceClass::MCC,
                                 {0.85, 0.15}, kFirst);
  CHECK(mcc.activation_tti == 1);
  CHECK_FALSE(mcc.eligible(0));
  CHECK(mcc.eligible(1));
  CHECK(mcc.demand == 2.0);

  const auto mbb = admit_service(1, 0, 0.0, 1e3, 5.0, DuplexMode::UL, ServiceClass::MBB, {0.9, 0.1}, kFirst);
  CHECK(mbb.activation_tti == 1);
  CHECK(mbb.latency_budget == 5.0);
}

TEST_CASE("admit_service rejects bad input") {
  auto admit = [](double t, double demand, double budget, Weights w = {1, 1}) {
    return admit_service(0, 0, t, demand, budget, DuplexMode::UL, ServiceClass::MCC, w, kFirst);
  };
  CHECK_THROWS_AS(admit(0.0, 0.0, 1e-3), ValidationError);
  CHECK_THROWS_AS(admit(0.0, -5.0, 1e-3), ValidationError);
  CHECK_THROWS_AS(admit(0.0, 10.0, 0.0), ValidationError);
  CHECK_THROWS_AS(admit(0.0, 10.0, 1e-3, {-1, 0}), ValidationError);
  CHECK_THROWS_AS(admit(1e-3, 10.0, 1e-3), ValidationError);  // TTI is half-open
  CHECK_THROWS_AS(admit(-1e-6, 10.0, 1e-3), ValidationError);
}

TEST_CASE("update_demand") {
  Service s;
  s.demand = 1e3;
  update_demand(s, 10.0);
  CHECK(s.demand == 990.0);

  s.demand = 2.0;
  update_demand(s, 2.0);
  CHECK(s.demand == 0.0);
  CHECK(s.complete());

  s.demand = 500.0;
  update_demand(s, 0.0);
  CHECK(s.demand == 500.0);

  s.demand = 1000.0;
  update_demand(s, 1000.0 - 1e-10);
  CHECK(s.demand == 0.0);  // residue snapped

  s.demand = 10.0;
  CHECK_THROWS_AS(update_demand(s, 10.5), InconsistencyError);
}

TEST_CASE("update_latency steady state") {
  Service s;
  s.latency_budget = 5.0;
  s.activation_tti = 0;
  update_latency(s, TtiClock{3, 0.0, 1e-3});
  CHECK(s.latency_budget == doctest::Approx(4.999).epsilon(1e-12));

  s.latency_budget = 0.25e-3;
  update_latency(s, TtiClock{3, 0.0, 1e-3});
  CHECK(s.latency_budget == 0.0);
  CHECK(s.expired());
}

TEST_CASE("update_latency charges only the residual of the arrival TTI") {
  const TtiClock arrival_tti{4, 1.0, 1e-3};
  auto s = admit_service(0, 0, 1.0 + 0.6e-3, 10.0, 1e-3, DuplexMode::UL, ServiceClass::MCC, {1, 1},
                         arrival_tti);
  update_latency(s, arrival_tti);
  CHECK(s.latency_budget == doctest::Approx(0.6e-3).epsilon(1e-9));
  // Later TTIs are charged in full and the budget never increases.
  double last = s.latency_budget;
  for (int k = 0; k < 5; ++k) {
    update_latency(s, TtiClock{5 + k, 1.001 + k * 0.2e-3, 0.2e-3});
    CHECK(s.latency_budget <= last);
    CHECK(s.latency_budget >= 0.0);
    last = s.latency_budget;
  }
  CHECK(s.latency_budget == 0.0);
}

TEST_CASE("to_string") {
  CHECK(to_string(DuplexMode::UL) == "UL");
  CHECK(to_string(DuplexMode::DL) == "DL");
  CHECK(to_string(ServiceClass::MBB) == "MBB");
  CHECK(to_string(ServiceClass::MCC) == "MCC");
}
