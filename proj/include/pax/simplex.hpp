#pragma once

#include <vector>

namespace pax {

// min cost.x  subject to  rows.x <= rhs,  x >= 0
struct LpProblem {
  int nvars = 0;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> cost;
};

struct LpSolution {
  enum class Status { optimal, infeasible, unbounded, iteration_limit };
  Status status = Status::optimal;
  std::vector<double> x;
  double objective = 0.0;
  // shadow prices dObjective/d rhs_r (<= 0 for binding rows of a minimization)
  std::vector<double> duals;
  // infeasibility certificate y >= 0 with y.A >= 0 and y.rhs < 0
  std::vector<double> farkas;
  int iterations_phase1 = 0;
  int iterations_phase2 = 0;
};

// dense two-phase primal simplex with a lexicographic ratio test, deterministic
LpSolution solve_lp(const LpProblem& p, int max_iterations = 200000);

}  // namespace pax
