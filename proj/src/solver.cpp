#include "pax/solver.hpp"

#include <algorithm>
#include <cmath>

namespace pax {

namespace {

std::vector<double> midpoint_cell_masses(const BeliefDistribution& dist,
                                         const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> edges(n + 1);
  edges[0] = dist.support.lo;
  edges[n] = dist.support.hi;
  for (int k = 1; k < n; ++k) edges[k] = 0.5 * (nodes[k - 1] + nodes[k]);
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) w[k] = dist.cdf(edges[k + 1]) - dist.cdf(edges[k]);
  return w;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / (n - 1);
  return g;
}

}  // namespace

GridProgram build_program(const CrisisModel& m, int n1, int n2, bool strict_balance,
                          double quad_tol) {
  if (n1 < 2 || n2 < 2) throw PreconditionError("solver grids need at least 2 nodes per state");
  (void)quad_tol;
  GridProgram g;
  g.model = m;
  g.n1 = n1;
  g.n2 = n2;
  g.strict_balance = strict_balance;
  g.nodes1 = linspace(m.type_space(0).lo, m.type_space(0).hi, n1);
  g.nodes2 = linspace(m.type_space(1).lo, m.type_space(1).hi, n2);
  g.weight1 = midpoint_cell_masses(m.states[0].belief, g.nodes1);
  g.weight2 = midpoint_cell_masses(m.states[1].belief, g.nodes2);

  g.w1 = Table(n1, n2);
  g.w2 = Table(n1, n2);
  g.wc1 = Table(n1, n2);
  g.wc2 = Table(n1, n2);
  for (int k = 0; k < n1; ++k) {
    for (int l = 0; l < n2; ++l) {
      const double t1 = g.nodes1[k], t2 = g.nodes2[l];
      g.w1.at(k, l) = m.leader_war_payoff(0, t1, t2);
      g.w2.at(k, l) = m.leader_war_payoff(1, t1, t2);
      g.wc1.at(k, l) = m.citizen_war_payoff(0, t1, t2);
      g.wc2.at(k, l) = m.citizen_war_payoff(1, t1, t2);
    }
  }
  g.W1.assign(n1, 0.0);
  g.Wc1.assign(n1, 0.0);
  for (int k = 0; k < n1; ++k) {
    for (int l = 0; l < n2; ++l) {
      g.W1[k] += g.weight2[l] * g.w1.at(k, l);
      g.Wc1[k] += g.weight2[l] * g.wc1.at(k, l);
    }
  }
  g.W2.assign(n2, 0.0);
  g.Wc2.assign(n2, 0.0);
  for (int l = 0; l < n2; ++l) {
    for (int k = 0; k < n1; ++k) {
      g.W2[l] += g.weight1[k] * g.w2.at(k, l);
      g.Wc2[l] += g.weight1[k] * g.wc2.at(k, l);
    }
  }

  const int nn = n1 * n2;
  g.lp.nvars = 3 * nn;
  g.lp.cost.assign(g.lp.nvars, 0.0);
  for (int k = 0; k < n1; ++k)
    for (int l = 0; l < n2; ++l) g.lp.cost[g.var_pi(k, l)] = g.weight1[k] * g.weight2[l];

  auto add_row = [&](std::vector<double> row, double rhs, RowTag tag) {
    g.lp.rows.push_back(std::move(row));
    g.lp.rhs.push_back(rhs);
    g.tags.push_back(tag);
  };

  // state-0 IC: U0(to | from) - U0(from | from) <= 0
  for (int from = 0; from < n1; ++from) {
    for (int to = 0; to < n1; ++to) {
      if (to == from) continue;
      std::vector<double> row(g.lp.nvars, 0.0);
      for (int l = 0; l < n2; ++l) {
        const double w = g.weight2[l];
        row[g.var_pi(to, l)] += w * g.w1.at(from, l);
        row[g.var_pi(from, l)] -= w * g.w1.at(from, l);
        row[g.var_s1(to, l)] += w;
        row[g.var_s1(from, l)] -= w;
      }
      add_row(std::move(row), 0.0, {RowTag::Kind::ic, 0, from, to, 0, 0});
    }
  }
  // state-1 IC
  for (int from = 0; from < n2; ++from) {
    for (int to = 0; to < n2; ++to) {
      if (to == from) continue;
      std::vector<double> row(g.lp.nvars, 0.0);
      for (int k = 0; k < n1; ++k) {
        const double w = g.weight1[k];
        row[g.var_pi(k, to)] += w * g.w2.at(k, from);
        row[g.var_pi(k, from)] -= w * g.w2.at(k, from);
        row[g.var_s2(k, to)] += w;
        row[g.var_s2(k, from)] -= w;
      }
      add_row(std::move(row), 0.0, {RowTag::Kind::ic, 1, from, to, 0, 0});
    }
  }
  // leader IR: U_i(k) >= W_i(k), written as -U <= -W
  for (int k = 0; k < n1; ++k) {
    std::vector<double> row(g.lp.nvars, 0.0);
    for (int l = 0; l < n2; ++l) {
      row[g.var_pi(k, l)] = -g.weight2[l] * g.w1.at(k, l);
      row[g.var_s1(k, l)] = -g.weight2[l];
    }
    add_row(std::move(row), -g.W1[k], {RowTag::Kind::leader_ir, 0, k, 0, 0, 0});
  }
  for (int l = 0; l < n2; ++l) {
    std::vector<double> row(g.lp.nvars, 0.0);
    for (int k = 0; k < n1; ++k) {
      row[g.var_pi(k, l)] = -g.weight1[k] * g.w2.at(k, l);
      row[g.var_s2(k, l)] = -g.weight1[k];
    }
    add_row(std::move(row), -g.W2[l], {RowTag::Kind::leader_ir, 1, l, 0, 0, 0});
  }
  // citizen IR: E[pi wc + s_i] >= Wc(k)
  for (int k = 0; k < n1; ++k) {
    std::vector<double> row(g.lp.nvars, 0.0);
    for (int l = 0; l < n2; ++l) {
      row[g.var_pi(k, l)] = -g.weight2[l] * g.wc1.at(k, l);
      row[g.var_s1(k, l)] = -g.weight2[l];
    }
    add_row(std::move(row), -g.Wc1[k], {RowTag::Kind::citizen_ir, 0, k, 0, 0, 0});
  }
  for (int l = 0; l < n2; ++l) {
    std::vector<double> row(g.lp.nvars, 0.0);
    for (int k = 0; k < n1; ++k) {
      row[g.var_pi(k, l)] = -g.weight1[k] * g.wc2.at(k, l);
      row[g.var_s2(k, l)] = -g.weight1[k];
    }
    add_row(std::move(row), -g.Wc2[l], {RowTag::Kind::citizen_ir, 1, l, 0, 0, 0});
  }
  // per-node bounds: pi cap, budget ceiling, budget floor
  for (int k = 0; k < n1; ++k) {
    for (int l = 0; l < n2; ++l) {
      std::vector<double> row(g.lp.nvars, 0.0);
      row[g.var_pi(k, l)] = 1.0;
      add_row(std::move(row), 1.0, {RowTag::Kind::pi_upper, 0, 0, 0, k, l});

      std::vector<double> up(g.lp.nvars, 0.0);
      up[g.var_pi(k, l)] = 1.0;
      up[g.var_s1(k, l)] = 1.0;
      up[g.var_s2(k, l)] = 1.0;
      add_row(std::move(up), 1.0, {RowTag::Kind::budget_upper, 0, 0, 0, k, l});

      std::vector<double> down(g.lp.nvars, 0.0);
      down[g.var_pi(k, l)] = -1.0;
      down[g.var_s1(k, l)] = -1.0;
      down[g.var_s2(k, l)] = -1.0;
      add_row(std::move(down), strict_balance ? -1.0 : 0.0,
              {RowTag::Kind::budget_lower, 0, 0, 0, k, l});
    }
  }
  return g;
}

SolveResult minimize_war_probability(const GridProgram& g, const AuditOptions& audit_opts) {
  LpSolution lp = solve_lp(g.lp);
  if (lp.status != LpSolution::Status::optimal) {
    const char* what = lp.status == LpSolution::Status::infeasible
                           ? "grid program reported infeasible (the all-war menu should always "
                             "be feasible; numerical breakdown)"
                       : lp.status == LpSolution::Status::unbounded
                           ? "grid program reported unbounded (objective is bounded by "
                             "construction; numerical breakdown)"
                           : "simplex iteration cap exceeded";
    throw SolverError(what);
  }

  SolveResult res;
  res.objective = lp.objective;
  res.duals = std::move(lp.duals);
  res.iterations_phase1 = lp.iterations_phase1;
  res.iterations_phase2 = lp.iterations_phase2;

  const int n1 = g.n1, n2 = g.n2;
  Table pi(n1, n2), x1(n1, n2), x2(n1, n2);
  for (int k = 0; k < n1; ++k) {
    for (int l = 0; l < n2; ++l) {
      const double p_raw = lp.x[g.var_pi(k, l)];
      const double p = std::clamp(p_raw, 0.0, 1.0);
      res.max_clamp = std::max(res.max_clamp, std::abs(p - p_raw));
      double a, b;
      if (1.0 - p <= 1e-9) {
        a = b = 0.5;  // war node: shares are conventional
      } else {
        const double a_raw = lp.x[g.var_s1(k, l)] / (1.0 - p);
        const double b_raw = lp.x[g.var_s2(k, l)] / (1.0 - p);
        a = std::clamp(a_raw, 0.0, 1.0);
        b = std::clamp(b_raw, 0.0, 1.0);
        res.max_clamp = std::max({res.max_clamp, std::abs(a - a_raw), std::abs(b - b_raw)});
        if (a + b > 1.0) {
          res.max_clamp = std::max(res.max_clamp, a + b - 1.0);
          const double scale = 1.0 / (a + b);
          a *= scale;
          b *= scale;
        }
      }
      pi.at(k, l) = p;
      x1.at(k, l) = a;
      x2.at(k, l) = b;
    }
  }
  res.mechanism = DirectMechanism(g.nodes1, g.nodes2, pi, x1, x2);

  // evaluate the LP's own IC rows at the returned tables
  std::vector<double> xvec(g.lp.nvars, 0.0);
  for (int k = 0; k < n1; ++k) {
    for (int l = 0; l < n2; ++l) {
      const double p = pi.at(k, l);
      xvec[g.var_pi(k, l)] = p;
      xvec[g.var_s1(k, l)] = (1.0 - p) * x1.at(k, l);
      xvec[g.var_s2(k, l)] = (1.0 - p) * x2.at(k, l);
    }
  }
  double sum_ir_duals = 0.0;
  for (size_t r = 0; r < g.lp.rows.size(); ++r) {
    const RowTag& tag = g.tags[r];
    if (tag.kind == RowTag::Kind::ic) {
      double lhs = 0.0;
      for (int j = 0; j < g.lp.nvars; ++j) lhs += g.lp.rows[r][j] * xvec[j];
      res.node_ic_residual = std::max(res.node_ic_residual, lhs - g.lp.rhs[r]);
    } else if (tag.kind == RowTag::Kind::leader_ir || tag.kind == RowTag::Kind::citizen_ir) {
      sum_ir_duals += std::abs(res.duals[r]);
    }
  }

  // discrete interim utilities at own nodes
  res.interim_utility[0].assign(n1, 0.0);
  for (int k = 0; k < n1; ++k)
    for (int l = 0; l < n2; ++l)
      res.interim_utility[0][k] +=
          g.weight2[l] * (xvec[g.var_pi(k, l)] * g.w1.at(k, l) + xvec[g.var_s1(k, l)]);
  res.interim_utility[1].assign(n2, 0.0);
  for (int l = 0; l < n2; ++l)
    for (int k = 0; k < n1; ++k)
      res.interim_utility[1][l] +=
          g.weight1[k] * (xvec[g.var_pi(k, l)] * g.w2.at(k, l) + xvec[g.var_s2(k, l)]);

  // measured discretization error of the interim war values, scaled by the IR
  // shadow prices, plus the coarsest cell mass for boundary resolution
  double e_w = 0.0;
  for (int k = 0; k < n1; ++k)
    e_w = std::max(e_w, std::abs(g.W1[k] - interim_war_payoff(g.model, 0, g.nodes1[k])));
  for (int l = 0; l < n2; ++l)
    e_w = std::max(e_w, std::abs(g.W2[l] - interim_war_payoff(g.model, 1, g.nodes2[l])));
  const double coarse1 = *std::max_element(g.weight1.begin(), g.weight1.end());
  const double coarse2 = *std::max_element(g.weight2.begin(), g.weight2.end());
  res.discretization_tol = e_w * (1.0 + sum_ir_duals) + std::max(coarse1, coarse2);

  res.audit_report = audit(g.model, res.mechanism, audit_opts);
  return res;
}

}  // namespace pax
