#include "pax/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace pax {

namespace {

constexpr double kGridTol = 1e-9;  // relative to span: uniform spacing / endpoint match

// clamped cell locate on a uniform grid
std::pair<int, double> cell(const std::vector<double>& g, double t) {
  const int n = static_cast<int>(g.size());
  const double lo = g.front(), hi = g.back();
  const double tc = std::clamp(t, lo, hi);
  int k = static_cast<int>(std::floor((tc - lo) / ((hi - lo) / (n - 1))));
  k = std::clamp(k, 0, n - 2);
  const double w = std::clamp((tc - g[k]) / (g[k + 1] - g[k]), 0.0, 1.0);
  return {k, w};
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / (n - 1);
  return g;
}

}  // namespace

DirectMechanism::DirectMechanism(std::vector<double> g1, std::vector<double> g2, Table pi_tab,
                                 Table x1_tab, Table x2_tab)
    : grid1(std::move(g1)), grid2(std::move(g2)), pi(std::move(pi_tab)), x1(std::move(x1_tab)),
      x2(std::move(x2_tab)) {
  auto errs = shape_errors(grid1, grid2, pi, x1, x2);
  if (!errs.empty()) throw PreconditionError("malformed mechanism: " + join(errs, "; "));
}

DirectMechanism DirectMechanism::constant(const TypeSpace& s1, const TypeSpace& s2, int n1, int n2,
                                          double pi_val, double x1_val, double x2_val) {
  return DirectMechanism(linspace(s1.lo, s1.hi, n1), linspace(s2.lo, s2.hi, n2),
                         Table(n1, n2, pi_val), Table(n1, n2, x1_val), Table(n1, n2, x2_val));
}

double DirectMechanism::value(const Table& t, double t1, double t2) const {
  auto [k, u] = cell(grid1, t1);
  auto [l, w] = cell(grid2, t2);
  const double top = (1 - w) * t.at(k, l) + w * t.at(k, l + 1);
  const double bot = (1 - w) * t.at(k + 1, l) + w * t.at(k + 1, l + 1);
  return (1 - u) * top + u * bot;
}

OutcomeFn DirectMechanism::view() const {
  auto self = std::make_shared<DirectMechanism>(*this);
  OutcomeFn out;
  out.pi = [self](double a, double b) { return self->value(self->pi, a, b); };
  out.x1 = [self](double a, double b) { return self->value(self->x1, a, b); };
  out.x2 = [self](double a, double b) { return self->value(self->x2, a, b); };
  out.kinks1.assign(grid1.begin() + 1, grid1.end() - 1);
  out.kinks2.assign(grid2.begin() + 1, grid2.end() - 1);
  return out;
}

std::vector<std::string> DirectMechanism::shape_errors(const std::vector<double>& g1,
                                                       const std::vector<double>& g2,
                                                       const Table& pi, const Table& x1,
                                                       const Table& x2) {
  std::vector<std::string> errs;
  auto check_grid = [&](const std::vector<double>& g, const char* name) {
    if (g.size() < 2) {
      errs.push_back(std::string(name) + ": needs at least 2 nodes");
      return;
    }
    const double span = g.back() - g.front();
    if (!(span > 0)) {
      errs.push_back(std::string(name) + ": nodes must be strictly increasing");
      return;
    }
    const double h = span / (g.size() - 1);
    for (size_t k = 0; k + 1 < g.size(); ++k) {
      const double step = g[k + 1] - g[k];
      if (!(step > 0)) {
        errs.push_back(std::string(name) + ": nodes must be strictly increasing");
        return;
      }
      if (std::abs(step - h) > kGridTol * span) {
        errs.push_back(std::string(name) + ": nodes must be uniformly spaced");
        return;
      }
    }
  };
  check_grid(g1, "grid1");
  check_grid(g2, "grid2");
  auto check_table = [&](const Table& t, const char* name) {
    if (t.rows != (int)g1.size() || t.cols != (int)g2.size())
      errs.push_back(std::string(name) + ": table shape does not match the grids");
  };
  check_table(pi, "pi");
  check_table(x1, "x1");
  check_table(x2, "x2");
  return errs;
}

bool compatible(const CrisisModel& m, const DirectMechanism& mech) {
  if (mech.n1() < 2 || mech.n2() < 2) return false;
  for (int i = 0; i < 2; ++i) {
    const auto& g = i == 0 ? mech.grid1 : mech.grid2;
    const TypeSpace& ts = m.type_space(i);
    const double tol = kGridTol * std::max(ts.width(), g.back() - g.front());
    if (std::abs(g.front() - ts.lo) > tol || std::abs(g.back() - ts.hi) > tol) return false;
  }
  return true;
}

void require_compatible(const CrisisModel& m, const DirectMechanism& mech) {
  if (!compatible(m, mech))
    throw IncompatibleError("mechanism grid does not span the model's type rectangle");
}

double interim_utility_report(const CrisisModel& m, const DirectMechanism& mech, int i,
                              double report, double true_type, double tol) {
  return interim_utility_report(m, mech.view(), i, report, true_type, tol);
}

double interim_utility_truthful(const CrisisModel& m, const DirectMechanism& mech, int i,
                                double theta_i, double tol) {
  return interim_utility_truthful(m, mech.view(), i, theta_i, tol);
}

PeacePayoffs interim_peace_payoffs(const CrisisModel& m, const DirectMechanism& mech, int i,
                                   double theta_i, double tol) {
  return interim_peace_payoffs(m, mech.view(), i, theta_i, tol);
}

InterimProfile tabulate_interim_profile(const CrisisModel& m, const DirectMechanism& mech, int i,
                                        double tol) {
  require_compatible(m, mech);
  OutcomeFn out = mech.view();
  InterimProfile p;
  p.state = i;
  p.theta_grid = i == 0 ? mech.grid1 : mech.grid2;
  for (double theta : p.theta_grid) {
    p.W.push_back(interim_war_payoff(m, i, theta, tol));
    p.Wc.push_back(interim_citizen_war_payoff(m, i, theta, tol));
    const PeacePayoffs pp = interim_peace_payoffs(m, out, i, theta, tol);
    p.V.push_back(pp.V);
    p.X.push_back(pp.X);
    p.U.push_back(interim_utility_truthful(m, out, i, theta, tol));
  }
  return p;
}

namespace {

ICResult scan_ic(const CrisisModel& m, const DirectMechanism& mech, int dev_n1, int dev_n2,
                 double quad_tol) {
  require_compatible(m, mech);
  OutcomeFn out = mech.view();
  ICResult res;
  res.true_type = mech.grid1.front();
  res.best_report = res.true_type;
  for (int i = 0; i < 2; ++i) {
    const auto& own = i == 0 ? mech.grid1 : mech.grid2;
    const int dev_n = i == 0 ? dev_n1 : dev_n2;
    const TypeSpace& ts = m.type_space(i);
    for (double theta : own) {
      const double u_truth = interim_utility_truthful(m, out, i, theta, quad_tol);
      for (int r = 0; r < dev_n; ++r) {
        const double rep = ts.lo + ts.width() * r / (dev_n - 1);
        const double gain = interim_utility_report(m, out, i, rep, theta, quad_tol) - u_truth;
        if (gain > res.max_gain) {
          res.max_gain = gain;
          res.state = i;
          res.true_type = theta;
          res.best_report = rep;
        }
      }
    }
  }
  return res;
}

int refined_nodes(int n, int refine) { return refine * (n - 1) + 1; }

SpreadResult v_spread(const CrisisModel& m, const DirectMechanism& mech, double tol,
                      double quad_tol) {
  OutcomeFn out = mech.view();
  SpreadResult s;
  s.tol = tol;
  for (int i = 0; i < 2; ++i) {
    const auto& own = i == 0 ? mech.grid1 : mech.grid2;
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin, sum = 0.0;
    for (double theta : own) {
      const double v = interim_peace_payoffs(m, out, i, theta, quad_tol).V;
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
      sum += v;
    }
    s.spread[i] = vmax - vmin;
    s.v_mean[i] = sum / static_cast<double>(own.size());
  }
  s.passed = s.spread[0] <= tol && s.spread[1] <= tol;
  return s;
}

}  // namespace

ICResult check_incentive_compatibility(const CrisisModel& m, const DirectMechanism& mech,
                                       int deviation_grid_size, double tol, double quad_tol) {
  if (deviation_grid_size < std::max(mech.n1(), mech.n2()))
    throw PreconditionError("deviation grid must be at least as fine as the mechanism grid");
  ICResult res = scan_ic(m, mech, deviation_grid_size, deviation_grid_size, quad_tol);
  res.tol = tol;
  res.passed = res.max_gain <= tol;
  return res;
}

EnvelopeResult check_envelope_condition(const CrisisModel& m, const DirectMechanism& mech,
                                        double tol, int refine, double quad_tol) {
  require_compatible(m, mech);
  if (refine < 1) throw PreconditionError("envelope refinement factor must be >= 1");
  OutcomeFn out = mech.view();
  EnvelopeResult res;
  res.tol = tol;
  res.residual_theta = mech.grid1.front();
  res.monotone_theta_lo = res.monotone_theta_hi = mech.grid1.front();
  for (int i = 0; i < 2; ++i) {
    const auto& own = i == 0 ? mech.grid1 : mech.grid2;
    const int n = static_cast<int>(own.size());
    const auto& breaks = out.kinks(1 - i);
    const BeliefDistribution& opp = m.opponent_belief(i);

    std::vector<double> tg;
    tg.reserve(static_cast<size_t>(refined_nodes(n, refine)));
    for (int k = 0; k + 1 < n; ++k)
      for (int s = 0; s < refine; ++s) tg.push_back(own[k] + (own[k + 1] - own[k]) * s / refine);
    tg.push_back(own.back());

    // marginal m(t) = E_j[pi(t, theta_j) dw_i/dt], the envelope integrand
    std::vector<double> marg(tg.size());
    for (size_t r = 0; r < tg.size(); ++r) {
      const double t = tg[r];
      auto f = [&](double tj) {
        const double t1 = i == 0 ? t : tj, t2 = i == 0 ? tj : t;
        return out.pi(t1, t2) * m.leader_war_payoff_slope(i, t1, t2);
      };
      marg[r] = integrate_over_opponent(f, opp, breaks, quad_tol);
    }
    std::vector<double> acc(tg.size(), 0.0);
    for (size_t r = 0; r + 1 < tg.size(); ++r)
      acc[r + 1] = acc[r] + 0.5 * (tg[r + 1] - tg[r]) * (marg[r] + marg[r + 1]);

    const double u0 = interim_utility_truthful(m, out, i, own.front(), quad_tol);
    for (int k = 1; k < n; ++k) {
      const double uk = interim_utility_truthful(m, out, i, own[k], quad_tol);
      const double resid = std::abs(uk - u0 - acc[static_cast<size_t>(k) * refine]);
      if (resid > res.max_residual) {
        res.max_residual = resid;
        res.residual_state = i;
        res.residual_theta = own[k];
      }
    }
    for (int k = 0; k + 1 < n; ++k) {
      const double drop =
          marg[static_cast<size_t>(k) * refine] - marg[static_cast<size_t>(k + 1) * refine];
      if (drop > res.worst_marginal_drop) {
        res.worst_marginal_drop = drop;
        res.monotone_state = i;
        res.monotone_theta_lo = own[k];
        res.monotone_theta_hi = own[k + 1];
      }
    }
  }
  res.marginal_monotone = res.worst_marginal_drop <= tol;
  res.passed = res.max_residual <= tol && res.marginal_monotone;
  return res;
}

ParticipationResult check_participation(const CrisisModel& m, const DirectMechanism& mech,
                                        double tol, double peace_tol, double quad_tol) {
  require_compatible(m, mech);
  OutcomeFn out = mech.view();
  ParticipationResult res;
  res.tol = tol;
  const auto [minpi_it, maxpi_it] = std::minmax_element(mech.pi.v.begin(), mech.pi.v.end());
  res.peaceful_reading = *maxpi_it <= peace_tol;
  res.citizen_vacuous = *minpi_it >= 1.0 - peace_tol;
  for (int i = 0; i < 2; ++i) {
    const auto& own = i == 0 ? mech.grid1 : mech.grid2;
    for (double theta : own) {
      const double w = interim_war_payoff(m, i, theta, quad_tol);
      const double wc = interim_citizen_war_payoff(m, i, theta, quad_tol);
      const PeacePayoffs pp = interim_peace_payoffs(m, out, i, theta, quad_tol);
      const double u = interim_utility_truthful(m, out, i, theta, quad_tol);
      if (pp.V - w < res.leader_v_worst) {
        res.leader_v_worst = pp.V - w;
        res.leader_v_state = i;
        res.leader_v_theta = theta;
      }
      if (u - w < res.leader_u_worst) {
        res.leader_u_worst = u - w;
        res.leader_u_state = i;
        res.leader_u_theta = theta;
      }
      if (pp.X - wc < res.citizen_worst) {
        res.citizen_worst = pp.X - wc;
        res.citizen_state = i;
        res.citizen_theta = theta;
      }
    }
  }
  res.passed = res.operative_leader_worst() >= -tol &&
               (res.citizen_vacuous || res.citizen_worst >= -tol);
  return res;
}

FeasPeaceResult check_feasibility_and_peace(const DirectMechanism& mech, double feas_tol,
                                            double peace_tol) {
  FeasPeaceResult res;
  res.feas_tol = feas_tol;
  res.peace_tol = peace_tol;
  res.worst_violation = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < mech.n1(); ++k) {
    for (int l = 0; l < mech.n2(); ++l) {
      const double p = mech.pi.at(k, l), a = mech.x1.at(k, l), b = mech.x2.at(k, l);
      const double viol = std::max({p - 1.0, -p, -a, -b, a + b - 1.0});
      if (viol > res.worst_violation) {
        res.worst_violation = viol;
        res.violation_node1 = k;
        res.violation_node2 = l;
      }
      res.max_pi = std::max(res.max_pi, p);
      res.min_pi = std::min(res.min_pi, p);
    }
  }
  res.feasible = res.worst_violation <= feas_tol;
  res.peaceful = res.max_pi <= peace_tol;
  return res;
}

SpreadResult check_constant_peace_payoff(const CrisisModel& m, const DirectMechanism& mech,
                                         double tol) {
  require_compatible(m, mech);
  const AuditOptions defaults;
  const FeasPeaceResult fp = check_feasibility_and_peace(mech, defaults.feas_tol,
                                                         defaults.peace_tol);
  if (!fp.peaceful)
    throw PreconditionError("constant-peace-payoff check requires a peaceful mechanism (max pi " +
                            fmt12(fp.max_pi) + ")");
  const ICResult ic =
      scan_ic(m, mech, refined_nodes(mech.n1(), defaults.deviation_refine),
              refined_nodes(mech.n2(), defaults.deviation_refine), defaults.quad_tol);
  if (ic.max_gain > defaults.ic_tol)
    throw PreconditionError(
        "constant-peace-payoff check requires an incentive-compatible mechanism (max gain " +
        fmt12(ic.max_gain) + ")");
  return v_spread(m, mech, tol, defaults.quad_tol);
}

AuditReport audit(const CrisisModel& m, const DirectMechanism& mech, const AuditOptions& opts) {
  require_compatible(m, mech);
  AuditReport r;
  r.options = opts;
  r.feas = check_feasibility_and_peace(mech, opts.feas_tol, opts.peace_tol);
  const int dev1 = opts.deviation_nodes > 0 ? opts.deviation_nodes
                                            : refined_nodes(mech.n1(), opts.deviation_refine);
  const int dev2 = opts.deviation_nodes > 0 ? opts.deviation_nodes
                                            : refined_nodes(mech.n2(), opts.deviation_refine);
  r.ic = scan_ic(m, mech, dev1, dev2, opts.quad_tol);
  r.ic.tol = opts.ic_tol;
  r.ic.passed = r.ic.max_gain <= opts.ic_tol;
  r.envelope = check_envelope_condition(m, mech, opts.envelope_tol, opts.envelope_refine,
                                        opts.quad_tol);
  r.participation = check_participation(m, mech, opts.ir_tol, opts.peace_tol, opts.quad_tol);
  if (r.feas.peaceful && r.ic.passed) r.spread = v_spread(m, mech, opts.ic_tol, opts.quad_tol);
  return r;
}

}  // namespace pax
