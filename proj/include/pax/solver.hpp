#pragma once

#include "pax/analysis.hpp"
#include "pax/simplex.hpp"

namespace pax {

// one LP row's meaning, for dual/witness reporting
struct RowTag {
  enum class Kind { ic, leader_ir, citizen_ir, pi_upper, budget_upper, budget_lower };
  Kind kind{};
  int state = 0;      // ic / ir rows
  int from = 0;       // ic: truthful node index
  int to = 0;         // ic: deviant report node index
  int node1 = 0;      // bound rows
  int node2 = 0;
};

// war-minimization LP over a node grid. Variables are pi(k,l) and the
// settlement masses s_i(k,l) = (1-pi) x_i, which keep every constraint
// linear; shares are recovered after the solve. Audience costs are zero
// inside the program; war payoffs are evaluated at node pairs.
struct GridProgram {
  CrisisModel model;  // as supplied; the LP itself prices audience costs at zero
  int n1 = 0, n2 = 0;
  std::vector<double> nodes1, nodes2;
  std::vector<double> weight1, weight2;  // midpoint-cell masses, each summing to 1
  Table w1, w2, wc1, wc2;                // payoffs at node pairs (k,l)
  std::vector<double> W1, W2, Wc1, Wc2;  // discrete interim war values per own node
  bool strict_balance = false;           // peace must divide the whole resource
  LpProblem lp;
  std::vector<RowTag> tags;

  int var_pi(int k, int l) const { return k * n2 + l; }
  int var_s1(int k, int l) const { return n1 * n2 + k * n2 + l; }
  int var_s2(int k, int l) const { return 2 * n1 * n2 + k * n2 + l; }
};

GridProgram build_program(const CrisisModel& m, int n1, int n2, bool strict_balance = false,
                          double quad_tol = kQuadTol);

struct SolveResult {
  DirectMechanism mechanism;
  double objective = 0.0;
  std::vector<double> duals;
  int iterations_phase1 = 0;
  int iterations_phase2 = 0;
  double node_ic_residual = 0.0;  // worst LP IC-row violation by the returned tables
  double max_clamp = 0.0;         // largest adjustment made recovering shares
  // reported bound on how much grid refinement may move the objective:
  // measured interim-value discretization error scaled by IR shadow prices,
  // plus the coarsest cell's probability mass
  double discretization_tol = 0.0;
  std::array<std::vector<double>, 2> interim_utility;  // discrete U at own nodes
  AuditReport audit_report;  // full audit of the returned mechanism
};

// dense two-phase simplex solve; throws SolverError when the LP does not
// reach an optimum (iteration cap, numerically broken feasibility)
SolveResult minimize_war_probability(const GridProgram& g, const AuditOptions& audit_opts = {});

}  // namespace pax
