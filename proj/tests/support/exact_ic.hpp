#pragma once

#include "pax/mechanism.hpp"
#include "pax/model.hpp"

namespace paxtest {

// Threshold menu that is incentive compatible exactly, not just within audit
// tolerance. State 1's war probability steps from 0 to 1 across one grid cell
// [g1[ramp_cell], g1[ramp_cell+1]]; first-order incentive compatibility for a
// war payoff that is affine in the own type (slope beta) requires the expected
// settlement share to ramp with slope beta/2 from the pinned level
//   X = E[war payoff at the ramp midpoint]
// and to stay flat below the threshold. State 2's share depends only on the
// opponent report, which makes state 2 trivially truthful. Assumes zero
// audience costs.
struct ThresholdSpec {
  int n1 = 5, n2 = 5;
  int ramp_cell = 2;
  double x2_base = 0.3;   // x2 = x2_base + x2_slope * theta1
  double x2_slope = 0.0;
};

inline pax::DirectMechanism exact_threshold(const pax::CrisisModel& m, const ThresholdSpec& s) {
  const auto linspace = [](double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / (n - 1);
    return g;
  };
  const auto g1 = linspace(m.type_space(0).lo, m.type_space(0).hi, s.n1);
  const auto g2 = linspace(m.type_space(1).lo, m.type_space(1).hi, s.n2);

  const double anchor = g1.front();
  const double beta = m.leader_war_payoff_slope(0, anchor, g2.front());
  const double a_bar = pax::interim_war_payoff(m, 0, anchor) - beta * anchor;

  const int mc = s.ramp_cell;
  const double mid = 0.5 * (g1[mc] + g1[mc + 1]);
  const double level = a_bar + beta * mid;

  pax::Table pi(s.n1, s.n2), x1(s.n1, s.n2), x2(s.n1, s.n2);
  for (int k = 0; k < s.n1; ++k) {
    const double xbar = k <= mc ? level : level + 0.5 * beta * (g1[k] - g1[mc]);
    for (int l = 0; l < s.n2; ++l) {
      pi.at(k, l) = k <= mc ? 0.0 : 1.0;
      x1.at(k, l) = xbar;
      x2.at(k, l) = s.x2_base + s.x2_slope * g1[k];
    }
  }
  return pax::DirectMechanism(g1, g2, pi, x1, x2);
}

}  // namespace paxtest
