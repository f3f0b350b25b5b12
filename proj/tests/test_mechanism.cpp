#include <cmath>

#include "doctest.h"
#include "pax/mechanism.hpp"
#include "support/exact_ic.hpp"
#include "support/models.hpp"

using namespace pax;
using paxtest::baseline_model;
using paxtest::exact_threshold;
using paxtest::ThresholdSpec;

namespace {

// share ramp in the own report on a 2-node grid: x1(r, .) = slope * r
DirectMechanism ramp_mechanism(double slope) {
  Table pi(2, 2, 0.0), x1(2, 2, 0.0), x2(2, 2, 0.3);
  x1.at(1, 0) = slope;
  x1.at(1, 1) = slope;
  return DirectMechanism({0.0, 1.0}, {0.0, 1.0}, pi, x1, x2);
}

}  // namespace

TEST_CASE("constructor checks shape, not values") {
  Table ok(2, 2, 0.5);
  CHECK_NOTHROW(DirectMechanism({0.0, 1.0}, {0.0, 1.0}, ok, ok, ok));

  // value violations load fine; they are audit findings
  Table wild(2, 2, 1.7);
  CHECK_NOTHROW(DirectMechanism({0.0, 1.0}, {0.0, 1.0}, wild, ok, ok));

  CHECK_THROWS_AS(DirectMechanism({0.0}, {0.0, 1.0}, ok, ok, ok), PreconditionError);
  CHECK_THROWS_AS(DirectMechanism({0.0, 1.0}, {1.0, 0.0}, ok, ok, ok), PreconditionError);
  CHECK_THROWS_AS(DirectMechanism({0.0, 0.2, 1.0}, {0.0, 1.0}, Table(3, 2), Table(3, 2),
                                  Table(3, 2)),
                  PreconditionError);  // non-uniform spacing
  CHECK_THROWS_AS(DirectMechanism({0.0, 1.0}, {0.0, 1.0}, Table(3, 2), Table(2, 2), Table(2, 2)),
                  PreconditionError);  // table shape mismatch
}

TEST_CASE("bilinear evaluation between nodes") {
  Table pi(2, 2), x1(2, 2, 0.25), x2(2, 2, 0.25);
  pi.at(0, 0) = 0.0;
  pi.at(0, 1) = 1.0;
  pi.at(1, 0) = 1.0;
  pi.at(1, 1) = 0.0;
  DirectMechanism mech({0.0, 1.0}, {0.0, 1.0}, pi, x1, x2);
  CHECK(mech.pi_at(0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mech.pi_at(0.25, 0.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(mech.pi_at(0.0, 0.75) == doctest::Approx(0.75).epsilon(1e-12));
  // clamped outside the grid
  CHECK(mech.pi_at(-0.5, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("view outlives the mechanism") {
  OutcomeFn out;
  {
    DirectMechanism mech = DirectMechanism::constant({0.0, 1.0}, {0.0, 1.0}, 3, 3, 0.25, 0.4, 0.5);
    out = mech.view();
  }
  CHECK(out.pi(0.4, 0.6) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(out.share(0, 0.4, 0.6) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(out.kinks(0).size() == 1);  // one interior node on a 3-node grid
}

TEST_CASE("grid compatibility with the model") {
  const CrisisModel m = baseline_model(0.2);
  auto good = DirectMechanism::constant({0.0, 1.0}, {0.0, 1.0}, 2, 2, 0.0, 0.5, 0.5);
  CHECK(compatible(m, good));
  CHECK_NOTHROW(require_compatible(m, good));

  auto narrow = DirectMechanism::constant({0.0, 0.5}, {0.0, 1.0}, 2, 2, 0.0, 0.5, 0.5);
  CHECK_FALSE(compatible(m, narrow));
  CHECK_THROWS_AS(require_compatible(m, narrow), IncompatibleError);
}

TEST_CASE("brute-force deviation scan") {
  const CrisisModel m = baseline_model(0.2);

  auto flat = DirectMechanism::constant({0.0, 1.0}, {0.0, 1.0}, 2, 2, 0.0, 0.5, 0.5);
  auto ic = check_incentive_compatibility(m, flat, 9);
  CHECK(ic.passed);
  CHECK(ic.max_gain == doctest::Approx(0.0).epsilon(1e-10));

  auto ramp = ramp_mechanism(0.5);
  ic = check_incentive_compatibility(m, ramp, 9);
  CHECK_FALSE(ic.passed);
  CHECK(ic.max_gain == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(ic.state == 0);
  CHECK(ic.true_type == doctest::Approx(0.0));
  CHECK(ic.best_report == doctest::Approx(1.0));

  // the report grid must refine the mechanism grid
  CHECK_THROWS_AS(
      (void)check_incentive_compatibility(m, exact_threshold(m, ThresholdSpec{}), 3),
      PreconditionError);
}

TEST_CASE("relabeling the states relabels the scan result") {
  const CrisisModel m = baseline_model(0.2);
  Table pi3(3, 2, 0.0), x1a(3, 2), x2a(3, 2, 0.3);
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 2; ++l) x1a.at(k, l) = 0.4 * (0.5 * k);
  DirectMechanism a({0.0, 0.5, 1.0}, {0.0, 1.0}, pi3, x1a, x2a);

  Table pi3t(2, 3, 0.0), x1b(2, 3, 0.3), x2b(2, 3);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 3; ++l) x2b.at(k, l) = 0.4 * (0.5 * l);
  DirectMechanism b({0.0, 1.0}, {0.0, 0.5, 1.0}, pi3t, x1b, x2b);

  auto ga = check_incentive_compatibility(m, a, 9);
  auto gb = check_incentive_compatibility(m, b, 9);
  CHECK(ga.state == 0);
  CHECK(gb.state == 1);
  CHECK(ga.max_gain == doctest::Approx(gb.max_gain).epsilon(1e-9));
}

TEST_CASE("exactly incentive-compatible thresholds pass both audits") {
  const CrisisModel m = baseline_model(0.2);

  for (ThresholdSpec spec : {ThresholdSpec{5, 5, 2, 0.3, 0.0}, ThresholdSpec{5, 5, 1, 0.3, 0.0},
                             ThresholdSpec{9, 9, 4, 0.25, 0.0}, ThresholdSpec{13, 13, 6, 0.3, 0.0},
                             ThresholdSpec{5, 4, 2, 0.2, 0.1}}) {
    auto mech = exact_threshold(m, spec);
    auto ic = check_incentive_compatibility(m, mech, 4 * spec.n1);
    CHECK(ic.passed);
    CHECK(ic.max_gain <= 1e-7);
    auto env = check_envelope_condition(m, mech);
    CHECK(env.passed);
    CHECK(env.max_residual <= 1e-6);
    CHECK(env.marginal_monotone);
  }

  // same construction under a beta belief
  CrisisModel skew = baseline_model(0.25);
  skew.states[0].belief = BeliefDistribution::beta({0.0, 1.0}, 2.0, 2.0);
  skew.states[1].belief = BeliefDistribution::beta({0.0, 1.0}, 1.5, 2.5);
  auto mech = exact_threshold(skew, ThresholdSpec{5, 5, 2, 0.3, 0.0});
  auto ic = check_incentive_compatibility(skew, mech, 20);
  CHECK(ic.passed);
  auto env = check_envelope_condition(skew, mech);
  CHECK(env.passed);
}

TEST_CASE("envelope audit flags the share ramp and the decreasing propensity") {
  const CrisisModel m = baseline_model(0.2);

  auto allwar = DirectMechanism::constant({0.0, 1.0}, {0.0, 1.0}, 2, 2, 1.0, 0.5, 0.5);
  auto env = check_envelope_condition(m, allwar);
  CHECK(env.passed);

  auto ramp = ramp_mechanism(0.5);
  env = check_envelope_condition(m, ramp);
  CHECK_FALSE(env.passed);
  CHECK(env.max_residual > 0.4);  // U(1) - U(0) = 0.5 with zero marginal

  // war on weak own reports only: marginal decreases
  Table pid(5, 5, 0.0), x1d(5, 5, 0.3), x2d(5, 5, 0.3);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 5; ++l) pid.at(k, l) = 1.0;
  std::vector<double> g = {0.0, 0.25, 0.5, 0.75, 1.0};
  DirectMechanism dec(g, g, pid, x1d, x2d);
  env = check_envelope_condition(m, dec);
  CHECK_FALSE(env.passed);
  CHECK_FALSE(env.marginal_monotone);
  CHECK(env.worst_marginal_drop > 0.1);
  auto ic = check_incentive_compatibility(m, dec, 17);
  CHECK(ic.max_gain > 1e-3);  // the scan agrees something is wrong
}

TEST_CASE("participation slacks at the pinned boundary") {
  auto flat = DirectMechanism::constant({0.0, 1.0}, {0.0, 1.0}, 2, 2, 0.0, 0.5, 0.5);

  auto pr = check_participation(baseline_model(0.3), flat);
  CHECK(pr.passed);
  CHECK(pr.peaceful_reading);
  CHECK(pr.leader_v_worst == doctest::Approx(0.05).epsilon(1e-8));
  CHECK(pr.citizen_worst == doctest::Approx(0.05).epsilon(1e-8));
  CHECK_FALSE(pr.citizen_vacuous);

  pr = check_participation(baseline_model(0.2), flat);
  CHECK_FALSE(pr.passed);
  CHECK(pr.leader_v_worst == doctest::Approx(-0.05).epsilon(1e-8));
  CHECK(pr.leader_v_theta == doctest::Approx(1.0));
  CHECK(pr.citizen_worst == doctest::Approx(-0.05).epsilon(1e-8));

  // all-war menu: the leader constraint moves to the menu value and the
  // citizen constraint is vacuous
  auto allwar = DirectMechanism::constant({0.0, 1.0}, {0.0, 1.0}, 2, 2, 1.0, 0.0, 0.0);
  pr = check_participation(baseline_model(0.2), allwar);
  CHECK(pr.passed);
  CHECK_FALSE(pr.peaceful_reading);
  CHECK(pr.leader_u_worst == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(pr.citizen_vacuous);
}

TEST_CASE("feasibility and peace flags") {
  auto fat = DirectMechanism::constant({0.0, 1.0}, {0.0, 1.0}, 2, 2, 0.0, 0.7, 0.6);
  auto f = check_feasibility_and_peace(fat);
  CHECK_FALSE(f.feasible);
  CHECK(f.worst_violation == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.peaceful);

  Table pi(2, 2, 0.0), x(2, 2, 0.25);
  pi.at(1, 1) = 1.0;
  auto corner = DirectMechanism({0.0, 1.0}, {0.0, 1.0}, pi, x, x);
  f = check_feasibility_and_peace(corner);
  CHECK(f.feasible);
  CHECK_FALSE(f.peaceful);
  CHECK(f.max_pi == doctest::Approx(1.0));
  CHECK(f.min_pi == doctest::Approx(0.0));

  Table bad(2, 2, -0.1);
  auto negative = DirectMechanism({0.0, 1.0}, {0.0, 1.0}, bad, x, x);
  f = check_feasibility_and_peace(negative);
  CHECK_FALSE(f.feasible);
  CHECK(f.worst_violation == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("constant peace payoff spread") {
  const CrisisModel m = baseline_model(0.3);

  auto flat = DirectMechanism::constant({0.0, 1.0}, {0.0, 1.0}, 2, 2, 0.0, 0.5, 0.5);
  auto sp = check_constant_peace_payoff(m, flat);
  CHECK(sp.passed);
  CHECK(sp.spread[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sp.v_mean[0] == doctest::Approx(0.5).epsilon(1e-9));

  // opponent-driven shares: V is still constant in the own type
  Table pi(2, 2, 0.0), x1(2, 2), x2(2, 2);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      x1.at(k, l) = 0.6 * l;
      x2.at(k, l) = 0.4 * k;
    }
  DirectMechanism swap({0.0, 1.0}, {0.0, 1.0}, pi, x1, x2);
  sp = check_constant_peace_payoff(m, swap);
  CHECK(sp.passed);
  CHECK(sp.v_mean[0] == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(sp.v_mean[1] == doctest::Approx(0.2).epsilon(1e-9));

  // not peaceful -> precondition failure
  auto allwar = DirectMechanism::constant({0.0, 1.0}, {0.0, 1.0}, 2, 2, 1.0, 0.5, 0.5);
  CHECK_THROWS_AS((void)check_constant_peace_payoff(m, allwar), PreconditionError);

  // not incentive compatible -> precondition failure
  CHECK_THROWS_AS((void)check_constant_peace_payoff(m, ramp_mechanism(0.5)), PreconditionError);
}

TEST_CASE("audit aggregates the checks and picks the spread precondition") {
  auto flat = DirectMechanism::constant({0.0, 1.0}, {0.0, 1.0}, 2, 2, 0.0, 0.5, 0.5);

  auto report = audit(baseline_model(0.3), flat);
  CHECK(report.passes());
  CHECK(report.spread.has_value());
  CHECK(report.spread->passed);

  // settlement too small for the boldest types: participation fails, the
  // other checks stand
  report = audit(baseline_model(0.2), flat);
  CHECK_FALSE(report.passes());
  CHECK(report.feas.feasible);
  CHECK(report.ic.passed);
  CHECK(report.envelope.passed);
  CHECK_FALSE(report.participation.passed);
  CHECK(report.spread.has_value());

  // a non-IC menu never reaches the spread check
  report = audit(baseline_model(0.2), ramp_mechanism(0.5));
  CHECK_FALSE(report.passes());
  CHECK_FALSE(report.ic.passed);
  CHECK_FALSE(report.spread.has_value());

  // explicit deviation grid override
  AuditOptions opts;
  opts.deviation_nodes = 21;
  report = audit(baseline_model(0.3), flat, opts);
  CHECK(report.passes());
}

TEST_CASE("interim profile tabulation on the mechanism grid") {
  const CrisisModel m = baseline_model(0.3);
  auto flat = DirectMechanism::constant({0.0, 1.0}, {0.0, 1.0}, 3, 3, 0.0, 0.5, 0.5);
  auto p = tabulate_interim_profile(m, flat, 0);
  REQUIRE(p.theta_grid.size() == 3);
  CHECK(p.W[0] == doctest::Approx(-0.05).epsilon(1e-9));
  CHECK(p.W[2] == doctest::Approx(0.45).epsilon(1e-9));
  CHECK(p.V[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.X[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.U[2] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.Wc[2] == doctest::Approx(p.W[2]).epsilon(1e-9));
}
