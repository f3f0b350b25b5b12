#include <algorithm>

#include "doctest.h"
#include "pax/model.hpp"
#include "support/models.hpp"

using namespace pax;
using paxtest::baseline_model;
using paxtest::one_sided_model;

TEST_CASE("two-sided war payoffs at pinned points") {
  const CrisisModel m = baseline_model(0.2);
  CHECK(m.leader_war_payoff(0, 1.0, 0.0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(m.citizen_war_payoff(0, 1.0, 0.0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(m.leader_war_payoff(1, 1.0, 0.0) == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(m.leader_war_payoff(0, 0.5, 0.5) == doctest::Approx(0.3).epsilon(1e-12));

  const CrisisModel biased = baseline_model(0.2, 1.0, 2.0, 1.0);
  CHECK(biased.leader_war_payoff(0, 1.0, 0.0) == doctest::Approx(0.6).epsilon(1e-12));
  // political bias leaves citizens untouched
  CHECK(biased.citizen_war_payoff(0, 1.0, 0.0) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("unbiased leaders agree with their citizens") {
  const CrisisModel m = baseline_model(0.3);
  for (double t1 : {0.0, 0.25, 0.7, 1.0})
    for (double t2 : {0.0, 0.4, 1.0})
      CHECK(m.leader_war_payoff(0, t1, t2) ==
            doctest::Approx(m.citizen_war_payoff(0, t1, t2)).epsilon(1e-12));
}

TEST_CASE("one-sided war payoffs: type is the negated fighting cost") {
  const CrisisModel m = one_sided_model(0.5, 1.0, 1.0);
  CHECK(m.leader_war_payoff(0, -0.3, -0.1) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(m.citizen_war_payoff(0, -0.3, -0.1) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(m.leader_war_payoff(1, -0.3, -0.1) == doctest::Approx(0.4).epsilon(1e-12));

  const CrisisModel hawk = one_sided_model(0.5, 2.0, 1.0);
  CHECK(hawk.leader_war_payoff(0, -0.3, -0.1) == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(hawk.citizen_war_payoff(0, -0.3, -0.1) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("war payoff slope in own type") {
  const CrisisModel two = baseline_model(0.25);
  CHECK(two.leader_war_payoff_slope(0, 0.4, 0.9) == doctest::Approx(0.5).epsilon(1e-9));
  const CrisisModel one = one_sided_model(0.6, 2.0, 1.0);
  CHECK(one.leader_war_payoff_slope(0, -0.2, -0.2) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(one.leader_war_payoff_slope(1, -0.2, -0.2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("payoff evaluation outside the type rectangle throws") {
  const CrisisModel m = baseline_model(0.2);
  CHECK_THROWS_AS((void)m.leader_war_payoff(0, 1.2, 0.5), std::domain_error);
  CHECK_THROWS_AS((void)m.citizen_war_payoff(1, 0.5, -0.1), std::domain_error);
}

TEST_CASE("belief distribution basics") {
  const TypeSpace unit{0.0, 1.0};
  auto u = BeliefDistribution::uniform(unit);
  CHECK(u.cdf(0.25) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(u.density(0.7) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(u.endpoint_singular());

  auto b = BeliefDistribution::beta(unit, 2.0, 2.0);
  CHECK(b.cdf(0.0) == doctest::Approx(0.0));
  CHECK(b.cdf(1.0) == doctest::Approx(1.0));
  CHECK(b.cdf(0.5) == doctest::Approx(0.5).epsilon(1e-10));  // symmetric
  CHECK_FALSE(b.endpoint_singular());
  CHECK(BeliefDistribution::beta(unit, 0.5, 0.5).endpoint_singular());

  auto tn = BeliefDistribution::truncated_normal(unit, 0.5, 0.25);
  CHECK(tn.cdf(0.0) == doctest::Approx(0.0));
  CHECK(tn.cdf(1.0) == doctest::Approx(1.0));
  CHECK(tn.cdf(0.5) == doctest::Approx(0.5).epsilon(1e-10));

  // shifted support
  auto wide = BeliefDistribution::uniform({-2.0, 2.0});
  CHECK(wide.cdf(0.0) == doctest::Approx(0.5));
  CHECK(wide.mass(-1.0, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("validation accepts the baseline and the one-sided model") {
  CHECK(validate(baseline_model(0.2)).empty());
  CHECK(validate(baseline_model(0.3, 0.5, 2.0, 1.0)).empty());
  CHECK(validate(one_sided_model(0.75)).empty());
  CHECK_NOTHROW((void)validated(baseline_model(0.25)));
}

TEST_CASE("validation diagnostics name the offending field") {
  auto has = [](const std::vector<std::string>& errs, const std::string& frag) {
    return std::any_of(errs.begin(), errs.end(), [&](const std::string& e) {
      return e.find(frag) != std::string::npos;
    });
  };

  CrisisModel m = baseline_model(0.2);
  m.states[0].gamma = 1.2;
  CHECK(has(validate(m), "gamma out of range [0,1]"));
  CHECK_THROWS_AS((void)validated(m), PreconditionError);

  m = baseline_model(0.2);
  m.states[1].lambda = 0.0;
  CHECK(has(validate(m), "lambda must be positive"));

  m = baseline_model(0.2);
  m.states[0].belief = BeliefDistribution::uniform({0.0, 2.0});
  CHECK(has(validate(m), "distribution support must match the type space"));

  m = baseline_model(0.2);
  m.states[0].belief = BeliefDistribution::beta({0.0, 1.0}, -1.0, 2.0);
  CHECK(has(validate(m), "beta shape parameters must be positive"));

  m = one_sided_model(0.6);
  m.tech.win_prob = {0.6, 0.6};
  CHECK(has(validate(m), "sum to 1"));

  m = one_sided_model(0.6);
  m.tech.win_prob = {1.4, -0.4};
  CHECK(has(validate(m), "winning probability outside [0,1]"));

  // shifting the base pushes the winning probability above one on the probe grid
  m = baseline_model(0.2);
  m.tech.base = {0.9, 0.1};
  CHECK(has(validate(m), "probe grid"));

  // a decreasing own-type component breaks leader monotonicity at the source
  m = baseline_model(0.2);
  m.tech.h[0] = ComponentFn::affine(-0.5, 0.5);
  CHECK(has(validate(m), "positive slope"));

  m = baseline_model(0.2);
  m.tech.h[0] = ComponentFn::tabulated({0.0, 1.0}, {0.5, 0.1});
  CHECK(has(validate(m), "strictly increasing"));
}

TEST_CASE("tabulated components evaluate piecewise linearly") {
  auto f = ComponentFn::tabulated({0.0, 0.5, 1.0}, {0.0, 0.2, 0.6});
  CHECK(f(0.25) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(f(0.75) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(f.derivative(0.25) == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(f.derivative(0.75) == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("audience cost rules") {
  auto z = AudienceCostRule::zero();
  CHECK(z.leader_value(0.37, 0.9) == doctest::Approx(0.37).epsilon(1e-12));

  auto aff = AudienceCostRule::affine(1.0, -0.1);
  CHECK(aff.leader_value(0.5, 0.2) == doctest::Approx(0.4).epsilon(1e-12));

  auto tab = AudienceCostRule::tabulated({0.0, 1.0}, {0.0, 1.0},
                                         Table(2, 2, 0.0));
  CHECK(tab.leader_value(0.3, 0.7) == doctest::Approx(0.0).epsilon(1e-12));
}
