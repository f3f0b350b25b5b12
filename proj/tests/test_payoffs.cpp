#include <sstream>

#include "doctest.h"
#include "pax/payoffs.hpp"
#include "support/models.hpp"

using namespace pax;
using paxtest::baseline_model;
using paxtest::one_sided_model;

namespace {

OutcomeFn constant_outcome(double pi, double x1, double x2) {
  OutcomeFn out;
  out.pi = [pi](double, double) { return pi; };
  out.x1 = [x1](double, double) { return x1; };
  out.x2 = [x2](double, double) { return x2; };
  return out;
}

}  // namespace

TEST_CASE("interim war payoffs against closed forms") {
  // symmetric contest: W(theta) = 1/4 + theta/2 - lambda*c
  const CrisisModel m = baseline_model(0.2);
  CHECK(interim_war_payoff(m, 0, 0.8) == doctest::Approx(0.45).epsilon(1e-9));
  CHECK(interim_war_payoff(m, 1, 0.0) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(interim_citizen_war_payoff(m, 0, 1.0) == doctest::Approx(0.55).epsilon(1e-9));

  const CrisisModel biased = baseline_model(0.2, 1.0, 2.0, 1.0);
  CHECK(interim_war_payoff(biased, 0, 1.0) == doctest::Approx(0.35).epsilon(1e-9));
  CHECK(interim_citizen_war_payoff(biased, 0, 1.0) == doctest::Approx(0.55).epsilon(1e-9));

  const CrisisModel free = baseline_model(0.0);
  CHECK(interim_citizen_war_payoff(free, 0, 1.0) == doctest::Approx(0.75).epsilon(1e-9));

  // fixed winning probabilities: the opponent's type does not matter
  const CrisisModel one = one_sided_model(0.5);
  CHECK(interim_war_payoff(one, 0, -0.1) == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(interim_war_payoff(one, 1, -0.45) == doctest::Approx(0.05).epsilon(1e-9));

  CHECK_THROWS_AS((void)interim_war_payoff(m, 0, 1.5), std::domain_error);
}

TEST_CASE("interim war payoffs under a beta belief") {
  CrisisModel m = baseline_model(0.2);
  m.states[1].belief = BeliefDistribution::beta({0.0, 1.0}, 2.0, 2.0);
  // E[theta2] is still 1/2, so W1 is unchanged
  CHECK(interim_war_payoff(m, 0, 0.8) == doctest::Approx(0.45).epsilon(1e-9));
  // a right-skewed opponent lowers W1
  m.states[1].belief = BeliefDistribution::beta({0.0, 1.0}, 2.0, 1.0);  // E = 2/3
  CHECK(interim_war_payoff(m, 0, 0.8) ==
        doctest::Approx(0.5 + 0.4 - 0.5 * (2.0 / 3.0) - 0.2).epsilon(1e-8));
}

TEST_CASE("interim peace payoffs") {
  const CrisisModel m = baseline_model(0.3);
  auto flat = constant_outcome(0.0, 0.5, 0.5);
  auto p = interim_peace_payoffs(m, flat, 0, 0.7);
  CHECK(p.V == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.X == doctest::Approx(0.5).epsilon(1e-9));

  // audience cost shaves the leader value, not the citizen share
  CrisisModel priced = baseline_model(0.3);
  priced.states[0].audience = AudienceCostRule::affine(1.0, -0.1);
  p = interim_peace_payoffs(priced, flat, 0, 0.7);
  CHECK(p.V == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(p.X == doctest::Approx(0.5).epsilon(1e-9));

  // share driven by the opponent report
  OutcomeFn swap;
  swap.pi = [](double, double) { return 0.0; };
  swap.x1 = [](double, double t2) { return t2; };
  swap.x2 = [](double t1, double) { return 1.0 - t1; };
  p = interim_peace_payoffs(m, swap, 0, 0.2);
  CHECK(p.V == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.X == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("report utility: war term at the true type, peace term at the report") {
  const CrisisModel m = baseline_model(0.2);

  // war regardless: every report yields the interim war payoff of the truth
  auto allwar = constant_outcome(1.0, 0.5, 0.5);
  for (double r : {0.0, 0.3, 1.0}) {
    CHECK(interim_utility_report(m, allwar, 0, r, 0.8) == doctest::Approx(0.45).epsilon(1e-9));
  }
  CHECK(interim_utility_truthful(m, allwar, 0, 0.8) == doctest::Approx(0.45).epsilon(1e-9));

  // peace regardless with a constant split: report cannot move the outcome
  auto flat = constant_outcome(0.0, 0.5, 0.5);
  CHECK(interim_utility_report(m, flat, 0, 0.9, 0.1) == doctest::Approx(0.5).epsilon(1e-9));

  // opponent-threshold rule: war only against resolve above 0.8
  OutcomeFn thresh;
  thresh.pi = [](double, double t2) { return t2 > 0.8 ? 1.0 : 0.0; };
  thresh.x1 = [](double, double) { return 0.5; };
  thresh.x2 = [](double, double) { return 0.5; };
  thresh.kinks2 = {0.8};
  CHECK(interim_utility_truthful(m, thresh, 0, 1.0) == doctest::Approx(0.47).epsilon(1e-9));

  // own-report threshold: reporting high buys war at the true type's payoff
  OutcomeFn own;
  own.pi = [](double t1, double) { return t1 >= 0.5 ? 1.0 : 0.0; };
  own.x1 = [](double, double) { return 0.4; };
  own.x2 = [](double, double) { return 0.4; };
  own.kinks1 = {0.5};
  CHECK(interim_utility_report(m, own, 0, 0.2, 0.9) == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(interim_utility_report(m, own, 0, 0.9, 0.9) == doctest::Approx(0.5).epsilon(1e-9));

  // share ramp in the own report: misreporting pays
  OutcomeFn ramp;
  ramp.pi = [](double, double) { return 0.0; };
  ramp.x1 = [](double t1, double) { return 0.5 * t1; };
  ramp.x2 = [](double t1, double) { return 1.0 - 0.5 * t1; };
  CHECK(interim_utility_report(m, ramp, 0, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(interim_utility_truthful(m, ramp, 0, 0.0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("audience costs are charged at the reported type") {
  CrisisModel m = baseline_model(0.2);
  // v(x, theta) = x - 0.1*theta, tabulated bilinearly
  Table v(2, 2);
  v.at(0, 0) = 0.0;
  v.at(0, 1) = -0.1;
  v.at(1, 0) = 1.0;
  v.at(1, 1) = 0.9;
  m.states[0].audience = AudienceCostRule::tabulated({0.0, 1.0}, {0.0, 1.0}, v);

  auto flat = constant_outcome(0.0, 0.5, 0.5);
  CHECK(interim_utility_report(m, flat, 0, 0.3, 0.9) == doctest::Approx(0.47).epsilon(1e-9));
  CHECK(interim_utility_report(m, flat, 0, 0.9, 0.9) == doctest::Approx(0.41).epsilon(1e-9));
}

TEST_CASE("interim profile CSV layout") {
  InterimProfile p;
  p.state = 0;
  p.theta_grid = {0.0, 1.0};
  p.W = {0.05, 0.55};
  p.Wc = {0.05, 0.55};
  p.V = {0.5, 0.5};
  p.X = {0.5, 0.5};
  p.U = {0.5, 0.55};
  std::ostringstream os;
  write_csv(os, p);
  std::istringstream in(os.str());
  std::string first, second;
  std::getline(in, first);
  CHECK(first == "theta,W,Wc,V,X,U");
  std::getline(in, second);
  CHECK(second == "0,0.05,0.05,0.5,0.5,0.5");
}
