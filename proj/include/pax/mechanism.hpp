#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pax/payoffs.hpp"

namespace pax {

// menu: reported type pair -> (war probability, settlement shares), tabulated
// on uniformly spaced per-state node grids, bilinear between nodes.
// Construction validates shape only (sizes, ordering, uniform spacing); value
// violations such as pi outside [0,1] are audit findings, not constructor
// errors, so that broken menus can still be loaded and diagnosed.
struct DirectMechanism {
  std::vector<double> grid1, grid2;
  Table pi, x1, x2;  // n1 x n2, row index follows grid1

  DirectMechanism() = default;
  DirectMechanism(std::vector<double> g1, std::vector<double> g2, Table pi_tab, Table x1_tab,
                  Table x2_tab);

  static DirectMechanism constant(const TypeSpace& s1, const TypeSpace& s2, int n1, int n2,
                                  double pi_val, double x1_val, double x2_val);

  int n1() const { return static_cast<int>(grid1.size()); }
  int n2() const { return static_cast<int>(grid2.size()); }

  double value(const Table& t, double t1, double t2) const;  // bilinear, clamped to the grids
  double pi_at(double t1, double t2) const { return value(pi, t1, t2); }
  double share_at(int i, double t1, double t2) const {
    return value(i == 0 ? x1 : x2, t1, t2);
  }

  // evaluators plus interior grid nodes as kink lists; safe to outlive *this
  OutcomeFn view() const;

  static std::vector<std::string> shape_errors(const std::vector<double>& g1,
                                               const std::vector<double>& g2, const Table& pi,
                                               const Table& x1, const Table& x2);
};

// grids must span the model's type rectangle (endpoints within 1e-9 of span)
bool compatible(const CrisisModel& m, const DirectMechanism& mech);
void require_compatible(const CrisisModel& m, const DirectMechanism& mech);  // IncompatibleError

// U_i(report | true_type) with the mechanism's tables as the outcome rule
double interim_utility_report(const CrisisModel& m, const DirectMechanism& mech, int i,
                              double report, double true_type, double tol = kQuadTol);
double interim_utility_truthful(const CrisisModel& m, const DirectMechanism& mech, int i,
                                double theta_i, double tol = kQuadTol);
PeacePayoffs interim_peace_payoffs(const CrisisModel& m, const DirectMechanism& mech, int i,
                                   double theta_i, double tol = kQuadTol);

// W, Wc, V, X, U for state i tabulated on the mechanism's own grid
InterimProfile tabulate_interim_profile(const CrisisModel& m, const DirectMechanism& mech, int i,
                                        double tol = kQuadTol);

struct AuditOptions {
  double ic_tol = 1e-6;
  double envelope_tol = 1e-4;  // residual accumulates two quadratures
  double ir_tol = 1e-8;
  double peace_tol = 1e-9;
  double feas_tol = 1e-9;
  double quad_tol = kQuadTol;
  int deviation_refine = 4;   // report grid = own grid refined this factor
  int envelope_refine = 8;    // accumulation grid for the envelope integral
  int deviation_nodes = 0;    // > 0: explicit report-grid size, overrides refine
};

struct ICResult {
  double max_gain = 0.0;  // >= 0: the truthful report is always available
  int state = 0;
  double true_type = 0.0;
  double best_report = 0.0;
  double tol = 0.0;
  bool passed = true;
};

struct EnvelopeResult {
  double max_residual = 0.0;
  int residual_state = 0;
  double residual_theta = 0.0;
  bool marginal_monotone = true;
  int monotone_state = 0;
  double monotone_theta_lo = 0.0, monotone_theta_hi = 0.0;
  double worst_marginal_drop = 0.0;  // largest decrease between adjacent nodes
  double tol = 0.0;
  bool passed = true;
};

struct ParticipationResult {
  // both leader readings are always reported; peaceful_reading says which one
  // is the operative constraint for the verdict
  double leader_v_worst = std::numeric_limits<double>::infinity();
  int leader_v_state = 0;
  double leader_v_theta = 0.0;
  double leader_u_worst = std::numeric_limits<double>::infinity();
  int leader_u_state = 0;
  double leader_u_theta = 0.0;
  bool peaceful_reading = false;
  double citizen_worst = std::numeric_limits<double>::infinity();
  int citizen_state = 0;
  double citizen_theta = 0.0;
  bool citizen_vacuous = false;  // all-war menu: settlement never happens
  double tol = 0.0;
  bool passed = true;

  double operative_leader_worst() const {
    return peaceful_reading ? leader_v_worst : leader_u_worst;
  }
};

struct FeasPeaceResult {
  bool feasible = true;
  double worst_violation = 0.0;  // max node violation of the simplex bounds
  int violation_node1 = -1, violation_node2 = -1;
  bool peaceful = false;  // max node pi <= peace tolerance
  double max_pi = 0.0;
  double min_pi = 1.0;
  double feas_tol = 0.0, peace_tol = 0.0;
};

struct SpreadResult {
  std::array<double, 2> spread{0.0, 0.0};  // max V - min V per state
  std::array<double, 2> v_mean{0.0, 0.0};
  double tol = 0.0;
  bool passed = true;
};

// brute-force deviation scan: true types at grid nodes, reports on a uniform
// grid of deviation_grid_size nodes per state (must be >= both grid sizes)
ICResult check_incentive_compatibility(const CrisisModel& m, const DirectMechanism& mech,
                                       int deviation_grid_size, double tol = 1e-6,
                                       double quad_tol = kQuadTol);

// envelope characterization: residual of U(theta) - U(lo) against the
// accumulated marginal, plus monotonicity of the marginal across grid nodes
EnvelopeResult check_envelope_condition(const CrisisModel& m, const DirectMechanism& mech,
                                        double tol = 1e-4, int refine = 8,
                                        double quad_tol = kQuadTol);

ParticipationResult check_participation(const CrisisModel& m, const DirectMechanism& mech,
                                        double tol = 1e-8, double peace_tol = 1e-9,
                                        double quad_tol = kQuadTol);

FeasPeaceResult check_feasibility_and_peace(const DirectMechanism& mech, double feas_tol = 1e-9,
                                            double peace_tol = 1e-9);

// constant-peace-payoff property: precondition peaceful and IC (audited here;
// PreconditionError otherwise), then the V spread per state must be <= tol
SpreadResult check_constant_peace_payoff(const CrisisModel& m, const DirectMechanism& mech,
                                         double tol = 1e-6);

struct AuditReport {
  FeasPeaceResult feas;
  ICResult ic;
  EnvelopeResult envelope;
  ParticipationResult participation;
  std::optional<SpreadResult> spread;  // present iff peaceful and IC passed
  AuditOptions options;

  bool passes() const {
    return feas.feasible && ic.passed && envelope.passed && participation.passed &&
           (!spread || spread->passed);
  }
};

AuditReport audit(const CrisisModel& m, const DirectMechanism& mech,
                  const AuditOptions& opts = {});

}  // namespace pax
