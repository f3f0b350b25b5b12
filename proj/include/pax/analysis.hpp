#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>

#include "pax/mechanism.hpp"

namespace pax {

// the headline scope-of-peace test: weighted strongest-type war demands
// against the unit resource, weak inequality
struct PlausibilityReport {
  double lhs = 0.0;
  bool plausible = false;
  std::array<double, 2> leader_component{};   // gamma_i * W_i(hi_i)
  std::array<double, 2> citizen_component{};  // (1-gamma_i) * Wc_i(hi_i)
  std::array<double, 2> w_top{};
  std::array<double, 2> wc_top{};
  // minimal per-state appeasement budget; candidate-based when supplied
  std::array<double, 2> price_of_peace{};
  bool has_candidate = false;
};

// the plausibility inequality is weak; lhs within this slack of the resource
// counts as a boundary case and is still (weakly) plausible
inline constexpr double kBoundarySlack = 1e-9;
bool boundary_plausible(const PlausibilityReport& r);

PlausibilityReport peace_plausibility(const CrisisModel& m, double quad_tol = kQuadTol);
// candidate per state: (constant leader peace value, citizen share at the
// strongest type); prices the candidate instead of the minimum
PlausibilityReport peace_plausibility(const CrisisModel& m,
                                      const std::array<PeacePayoffs, 2>& candidate_top,
                                      double quad_tol = kQuadTol);

// constant split meeting both leader and citizen strongest-type demands, when
// the budget allows; otherwise the plausibility report serves as certificate
struct ConstructionResult {
  std::optional<DirectMechanism> mechanism;
  PlausibilityReport certificate;
  std::array<double, 2> demands{};  // max(W_i(hi), Wc_i(hi))
  double demand_sum = 0.0;
  // weighted test passes yet unweighted demands exceed the budget (possible
  // only when some lambda != 1); reported, not resolved
  bool discrepancy = false;
};

ConstructionResult construct_peaceful_settlement(const CrisisModel& m, int n1 = 2, int n2 = 2,
                                                 double quad_tol = kQuadTol);

// cells where the summed weighted per-type demand exceeds the unit resource,
// evaluated at cell midpoints, massed by the product distribution
struct WarRegionReport {
  int cells1 = 0, cells2 = 0;
  std::vector<double> mid1, mid2;
  std::vector<std::uint8_t> indicator;  // row-major cells1 x cells2
  double mass = 0.0;
};

WarRegionReport war_region(const CrisisModel& m, int grid, double quad_tol = kQuadTol);

// columns: theta1,theta2,indicator
void write_csv(std::ostream& os, const WarRegionReport& r);

// interim war propensity E_j[pi(theta_i, .)] nondecreasing across grid nodes
struct PropensityResult {
  bool ok = true;
  int state = 0;  // worst adjacent pair
  double theta_lo = 0.0, theta_hi = 0.0;
  double worst_drop = 0.0;
  double slack = 1e-8;
  std::array<std::vector<double>, 2> propensity;  // per state, at mech nodes
};

PropensityResult check_monotone_war_propensity(const CrisisModel& m, const DirectMechanism& mech,
                                               double quad_tol = kQuadTol);

}  // namespace pax
