#include "pax/payoffs.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace pax {

namespace {

// width of the endpoint sliver that sidesteps integrable density singularities
constexpr double kSliverFrac = 1e-5;

// Mass-weighted mean position over [lo, hi]: integrate t dF by parts, with
// Simpson on the cdf. Exact for a uniform density; for an inverse-sqrt
// singularity it lands within 3% of the conditional mean, so charging the
// sliver at this point kills the first-order bias a midpoint charge carries.
double sliver_center(const BeliefDistribution& dist, double lo, double hi) {
  const double fl = dist.cdf(lo), fm = dist.cdf(0.5 * (lo + hi)), fr = dist.cdf(hi);
  const double mass = fr - fl;
  if (mass <= 0.0) return 0.5 * (lo + hi);
  const double int_cdf = (hi - lo) / 6.0 * (fl + 4.0 * fm + fr);
  return (hi * fr - lo * fl - int_cdf) / mass;
}

double run_weighted(const std::function<double(double)>& f, const BeliefDistribution& dist,
                    std::span<const double> breaks, double tol) {
  const TypeSpace& s = dist.support;
  double a = s.lo, b = s.hi, base = 0.0;
  if (dist.endpoint_singular()) {
    const double sliver = kSliverFrac * s.width();
    if (dist.a < 1.0) {  // left endpoint blows up
      base += dist.mass(a, a + sliver) * f(sliver_center(dist, a, a + sliver));
      a += sliver;
    }
    if (dist.b < 1.0) {  // right endpoint blows up
      base += dist.mass(b - sliver, b) * f(sliver_center(dist, b - sliver, b));
      b -= sliver;
    }
  }
  std::vector<double> inner;
  for (double t : breaks)
    if (t > a && t < b) inner.push_back(t);
  std::sort(inner.begin(), inner.end());
  auto g = [&](double t) { return f(t) * dist.density(t); };
  QuadratureResult r = integrate_adaptive_split(g, a, b, inner, tol);
  if (!r.converged)
    throw QuadratureError("quadrature did not converge, residual error " + fmt12(r.error),
                          r.error, base + r.value);
  return base + r.value;
}

}  // namespace

double integrate_over_opponent(const std::function<double(double)>& f,
                               const BeliefDistribution& dist, double tol) {
  return run_weighted(f, dist, {}, tol);
}

double integrate_over_opponent(const std::function<double(double)>& f,
                               const BeliefDistribution& dist,
                               std::span<const double> interior_breaks, double tol) {
  return run_weighted(f, dist, interior_breaks, tol);
}

double interim_war_payoff(const CrisisModel& m, int i, double theta_i, double tol) {
  if (!m.type_space(i).contains(theta_i)) throw std::domain_error("type outside the type space");
  auto f = [&](double tj) {
    const double t1 = i == 0 ? theta_i : tj, t2 = i == 0 ? tj : theta_i;
    return m.leader_war_payoff(i, t1, t2);
  };
  return integrate_over_opponent(f, m.opponent_belief(i), tol);
}

double interim_citizen_war_payoff(const CrisisModel& m, int i, double theta_i, double tol) {
  if (!m.type_space(i).contains(theta_i)) throw std::domain_error("type outside the type space");
  auto f = [&](double tj) {
    const double t1 = i == 0 ? theta_i : tj, t2 = i == 0 ? tj : theta_i;
    return m.citizen_war_payoff(i, t1, t2);
  };
  return integrate_over_opponent(f, m.opponent_belief(i), tol);
}

PeacePayoffs interim_peace_payoffs(const CrisisModel& m, const OutcomeFn& out, int i,
                                   double theta_i, double tol) {
  if (!m.type_space(i).contains(theta_i)) throw std::domain_error("type outside the type space");
  const auto& rule = m.states[i].audience;
  auto fx = [&](double tj) {
    const double t1 = i == 0 ? theta_i : tj, t2 = i == 0 ? tj : theta_i;
    return out.share(i, t1, t2);
  };
  auto fv = [&](double tj) { return rule.leader_value(fx(tj), theta_i); };
  const auto& breaks = out.kinks(1 - i);
  PeacePayoffs p;
  p.V = integrate_over_opponent(fv, m.opponent_belief(i), breaks, tol);
  p.X = integrate_over_opponent(fx, m.opponent_belief(i), breaks, tol);
  return p;
}

double interim_utility_report(const CrisisModel& m, const OutcomeFn& out, int i, double report,
                              double true_type, double tol) {
  if (!m.type_space(i).contains(report) || !m.type_space(i).contains(true_type))
    throw std::domain_error("type outside the type space");
  const auto& rule = m.states[i].audience;
  auto f = [&](double tj) {
    const double r1 = i == 0 ? report : tj, r2 = i == 0 ? tj : report;
    const double t1 = i == 0 ? true_type : tj, t2 = i == 0 ? tj : true_type;
    const double prob = out.pi(r1, r2);
    const double war = m.leader_war_payoff(i, t1, t2);
    const double peace = rule.leader_value(out.share(i, r1, r2), report);
    return prob * war + (1.0 - prob) * peace;
  };
  return integrate_over_opponent(f, m.opponent_belief(i), out.kinks(1 - i), tol);
}

double interim_utility_truthful(const CrisisModel& m, const OutcomeFn& out, int i, double theta_i,
                                double tol) {
  return interim_utility_report(m, out, i, theta_i, theta_i, tol);
}

void write_csv(std::ostream& os, const InterimProfile& p) {
  os << "theta,W,Wc,V,X,U\n";
  for (size_t k = 0; k < p.theta_grid.size(); ++k) {
    os << fmt12(p.theta_grid[k]) << ',' << fmt12(p.W[k]) << ',' << fmt12(p.Wc[k]) << ','
       << fmt12(p.V[k]) << ',' << fmt12(p.X[k]) << ',' << fmt12(p.U[k]) << '\n';
  }
}

}  // namespace pax
