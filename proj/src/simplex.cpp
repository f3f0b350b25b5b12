#include "pax/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pax {

namespace {
constexpr double kPivotTol = 1e-9;
}

LpSolution solve_lp(const LpProblem& p, int max_iterations) {
  const int n = p.nvars;
  const int m = static_cast<int>(p.rows.size());
  if ((int)p.rhs.size() != m || (int)p.cost.size() != n)
    throw std::invalid_argument("inconsistent LP dimensions");

  // columns: structural | slack | artificial | rhs. Rows with negative rhs are
  // negated (slack coefficient -1) and given an artificial for phase 1.
  std::vector<int> art_col(m, -1);
  int na = 0;
  for (int r = 0; r < m; ++r)
    if (p.rhs[r] < 0.0) ++na;
  const int cols = n + m + na + 1;
  const int rhs_col = cols - 1;

  std::vector<std::vector<double>> T(m + 2, std::vector<double>(cols, 0.0));
  std::vector<int> basis(m);
  int next_art = n + m;
  for (int r = 0; r < m; ++r) {
    const bool flip = p.rhs[r] < 0.0;
    const double sgn = flip ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) T[r][j] = sgn * p.rows[r][j];
    T[r][n + r] = sgn;
    T[r][rhs_col] = sgn * p.rhs[r];
    if (flip) {
      art_col[r] = next_art++;
      T[r][art_col[r]] = 1.0;
      basis[r] = art_col[r];
    } else {
      basis[r] = n + r;
    }
  }
  // row m: phase-2 reduced costs; row m+1: phase-1 reduced costs
  for (int j = 0; j < n; ++j) T[m][j] = p.cost[j];
  for (int r = 0; r < m; ++r)
    if (art_col[r] >= 0)
      for (int j = 0; j < cols; ++j) T[m + 1][j] -= T[r][j];
  for (int r = 0; r < m; ++r)
    if (art_col[r] >= 0) T[m + 1][art_col[r]] = 0.0;

  LpSolution sol;

  auto pivot = [&](int pr, int pc, int obj_rows) {
    const double pv = T[pr][pc];
    for (int j = 0; j < cols; ++j) T[pr][j] /= pv;
    for (int r = 0; r < m + obj_rows; ++r) {
      if (r == pr) continue;
      const double f = T[r][pc];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) T[r][j] -= f * T[pr][j];
      T[r][pc] = 0.0;  // cancel roundoff in the pivot column
    }
    T[pr][pc] = 1.0;
    basis[pr] = pc;
  };

  // Dantzig entering rule. The leaving row is picked by the lexicographic
  // ratio test (compare rhs/coef, then the basis-inverse block, then the
  // structural block), which rules out cycling under degeneracy without
  // perturbing the problem. Candidate pivots are screened by magnitude
  // relative to the largest one available so the tableau is never rescaled
  // by a near-zero division.
  auto lex_less = [&](int ra, double ca, int rb, double cb) {
    const double eps = 1e-12;
    const double d0 = T[ra][rhs_col] / ca - T[rb][rhs_col] / cb;
    if (d0 < -eps) return true;
    if (d0 > eps) return false;
    for (int j = n; j < cols - 1; ++j) {
      const double d = T[ra][j] / ca - T[rb][j] / cb;
      if (d < -eps) return true;
      if (d > eps) return false;
    }
    for (int j = 0; j < n; ++j) {
      const double d = T[ra][j] / ca - T[rb][j] / cb;
      if (d < -eps) return true;
      if (d > eps) return false;
    }
    return ra < rb;
  };

  auto iterate = [&](int obj_row, int col_limit, int obj_rows, int& iters) {
    while (true) {
      int enter = -1;
      double most = -kPivotTol;
      for (int j = 0; j < col_limit; ++j) {
        if (T[obj_row][j] < most) {
          most = T[obj_row][j];
          enter = j;
        }
      }
      if (enter < 0) return true;  // optimal for this phase
      double max_coef = 0.0;
      for (int r = 0; r < m; ++r) max_coef = std::max(max_coef, T[r][enter]);
      if (max_coef <= kPivotTol) return false;  // unbounded direction
      const double coef_floor = std::max(kPivotTol, 1e-6 * max_coef);
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r) {
        if (T[r][enter] < coef_floor) continue;
        const double ratio = std::max(T[r][rhs_col], 0.0) / T[r][enter];
        best_ratio = std::min(best_ratio, ratio);
      }
      const double cut = best_ratio + 1e-10 * (1.0 + best_ratio);
      int leave = -1;
      for (int r = 0; r < m; ++r) {
        if (T[r][enter] < coef_floor) continue;
        if (std::max(T[r][rhs_col], 0.0) / T[r][enter] > cut) continue;
        if (leave < 0 || lex_less(r, T[r][enter], leave, T[leave][enter])) leave = r;
      }
      pivot(leave, enter, obj_rows);
      for (int r = 0; r < m; ++r)
        if (T[r][rhs_col] < 0.0 && T[r][rhs_col] > -1e-11) T[r][rhs_col] = 0.0;
      if (++iters > max_iterations) {
        sol.status = LpSolution::Status::iteration_limit;
        return true;
      }
    }
  };

  // phase 1
  if (na > 0) {
    if (!iterate(m + 1, n + m, 2, sol.iterations_phase1)) {
      sol.status = LpSolution::Status::unbounded;  // cannot happen: phase 1 is bounded below
      return sol;
    }
    if (sol.status == LpSolution::Status::iteration_limit) return sol;
    const double infeas = -T[m + 1][rhs_col];
    if (infeas > 1e-7) {
      sol.status = LpSolution::Status::infeasible;
      sol.farkas.resize(m);
      for (int r = 0; r < m; ++r) sol.farkas[r] = T[m + 1][n + r];
      return sol;
    }
    // drive leftover zero-level artificials out of the basis, pivoting on the
    // largest-magnitude eligible element for stability
    for (int r = 0; r < m; ++r) {
      if (basis[r] < n + m) continue;
      int pc = -1;
      double best = kPivotTol;
      for (int j = 0; j < n + m; ++j) {
        if (std::abs(T[r][j]) > best) {
          best = std::abs(T[r][j]);
          pc = j;
        }
      }
      if (pc >= 0) {
        pivot(r, pc, 2);
      } else {
        for (int j = 0; j < cols; ++j) T[r][j] = 0.0;  // redundant row
      }
    }
  }

  // phase 2
  if (!iterate(m, n + m, 1, sol.iterations_phase2)) {
    sol.status = LpSolution::Status::unbounded;
    return sol;
  }
  if (sol.status == LpSolution::Status::iteration_limit) return sol;

  sol.status = LpSolution::Status::optimal;
  sol.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r)
    if (basis[r] < n) sol.x[basis[r]] = T[r][rhs_col];
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += p.cost[j] * sol.x[j];
  sol.duals.resize(m);
  for (int r = 0; r < m; ++r) sol.duals[r] = -T[m][n + r];
  return sol;
}

}  // namespace pax
