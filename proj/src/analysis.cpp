#include "pax/analysis.hpp"

#include <cmath>
#include <ostream>

namespace pax {

namespace {

// guard for exact-boundary budgets computed through quadrature roundoff
constexpr double kBudgetEps = 1e-12;

PlausibilityReport base_report(const CrisisModel& m, double quad_tol) {
  PlausibilityReport r;
  for (int i = 0; i < 2; ++i) {
    const double top = m.type_space(i).hi;
    r.w_top[i] = interim_war_payoff(m, i, top, quad_tol);
    r.wc_top[i] = interim_citizen_war_payoff(m, i, top, quad_tol);
    r.leader_component[i] = m.states[i].gamma * r.w_top[i];
    r.citizen_component[i] = (1.0 - m.states[i].gamma) * r.wc_top[i];
  }
  r.lhs = r.leader_component[0] + r.citizen_component[0] + r.leader_component[1] +
          r.citizen_component[1];
  r.plausible = r.lhs <= CrisisModel::kResource + kBoundarySlack;
  return r;
}

}  // namespace

bool boundary_plausible(const PlausibilityReport& r) {
  return std::abs(r.lhs - CrisisModel::kResource) <= kBoundarySlack;
}

PlausibilityReport peace_plausibility(const CrisisModel& m, double quad_tol) {
  PlausibilityReport r = base_report(m, quad_tol);
  for (int i = 0; i < 2; ++i)
    r.price_of_peace[i] = r.leader_component[i] + r.citizen_component[i];
  return r;
}

PlausibilityReport peace_plausibility(const CrisisModel& m,
                                      const std::array<PeacePayoffs, 2>& candidate_top,
                                      double quad_tol) {
  PlausibilityReport r = base_report(m, quad_tol);
  r.has_candidate = true;
  for (int i = 0; i < 2; ++i) {
    const double g = m.states[i].gamma;
    r.price_of_peace[i] = g * candidate_top[i].V + (1.0 - g) * candidate_top[i].X;
  }
  return r;
}

ConstructionResult construct_peaceful_settlement(const CrisisModel& m, int n1, int n2,
                                                 double quad_tol) {
  if (n1 < 2 || n2 < 2) throw PreconditionError("mechanism grids need at least 2 nodes per state");
  ConstructionResult res;
  res.certificate = peace_plausibility(m, quad_tol);
  for (int i = 0; i < 2; ++i)
    res.demands[i] = std::max(res.certificate.w_top[i], res.certificate.wc_top[i]);
  res.demand_sum = res.demands[0] + res.demands[1];
  if (res.demand_sum <= CrisisModel::kResource + kBudgetEps) {
    const double slack = CrisisModel::kResource - res.demand_sum;
    res.mechanism = DirectMechanism::constant(m.type_space(0), m.type_space(1), n1, n2, 0.0,
                                              res.demands[0] + 0.5 * slack,
                                              res.demands[1] + 0.5 * slack);
  } else {
    res.discrepancy = res.certificate.plausible;
  }
  return res;
}

WarRegionReport war_region(const CrisisModel& m, int grid, double quad_tol) {
  if (grid < 16) throw PreconditionError("war-region grid must be at least 16 cells per axis");
  WarRegionReport r;
  r.cells1 = r.cells2 = grid;
  std::array<std::vector<double>, 2> demand;  // weighted per-type demand at midpoints
  std::array<std::vector<double>, 2> cmass;   // cell probability masses
  for (int i = 0; i < 2; ++i) {
    const TypeSpace& ts = m.type_space(i);
    const BeliefDistribution& own_dist = m.states[i].belief;
    const double g = m.states[i].gamma;
    auto& mid = i == 0 ? r.mid1 : r.mid2;
    for (int k = 0; k < grid; ++k) {
      const double a = ts.lo + ts.width() * k / grid;
      const double b = ts.lo + ts.width() * (k + 1) / grid;
      const double t = 0.5 * (a + b);
      mid.push_back(t);
      demand[i].push_back(g * interim_war_payoff(m, i, t, quad_tol) +
                          (1.0 - g) * interim_citizen_war_payoff(m, i, t, quad_tol));
      cmass[i].push_back(own_dist.mass(a, b));
    }
  }
  r.indicator.assign(static_cast<size_t>(grid) * grid, 0);
  for (int k = 0; k < grid; ++k) {
    for (int l = 0; l < grid; ++l) {
      if (demand[0][k] + demand[1][l] > CrisisModel::kResource) {
        r.indicator[static_cast<size_t>(k) * grid + l] = 1;
        r.mass += cmass[0][k] * cmass[1][l];
      }
    }
  }
  return r;
}

void write_csv(std::ostream& os, const WarRegionReport& r) {
  os << "theta1,theta2,indicator\n";
  for (int k = 0; k < r.cells1; ++k)
    for (int l = 0; l < r.cells2; ++l)
      os << fmt12(r.mid1[k]) << ',' << fmt12(r.mid2[l]) << ','
         << int(r.indicator[static_cast<size_t>(k) * r.cells2 + l]) << '\n';
}

PropensityResult check_monotone_war_propensity(const CrisisModel& m, const DirectMechanism& mech,
                                               double quad_tol) {
  require_compatible(m, mech);
  OutcomeFn out = mech.view();
  PropensityResult res;
  res.theta_lo = res.theta_hi = mech.grid1.front();
  for (int i = 0; i < 2; ++i) {
    const auto& own = i == 0 ? mech.grid1 : mech.grid2;
    const auto& breaks = out.kinks(1 - i);
    auto& prop = res.propensity[i];
    for (double theta : own) {
      auto f = [&](double tj) {
        return i == 0 ? out.pi(theta, tj) : out.pi(tj, theta);
      };
      prop.push_back(integrate_over_opponent(f, m.opponent_belief(i), breaks, quad_tol));
    }
    for (size_t k = 0; k + 1 < prop.size(); ++k) {
      const double drop = prop[k] - prop[k + 1];
      if (drop > res.worst_drop) {
        res.worst_drop = drop;
        res.state = i;
        res.theta_lo = own[k];
        res.theta_hi = own[k + 1];
      }
    }
  }
  res.ok = res.worst_drop <= res.slack;
  return res;
}

}  // namespace pax
