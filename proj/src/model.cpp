#include "pax/model.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

namespace pax {

namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

}  // namespace

// ---- BeliefDistribution ----

BeliefDistribution BeliefDistribution::uniform(TypeSpace s) {
  BeliefDistribution d;
  d.kind = Kind::uniform;
  d.support = s;
  return d;
}

BeliefDistribution BeliefDistribution::beta(TypeSpace s, double a, double b) {
  BeliefDistribution d;
  d.kind = Kind::beta;
  d.support = s;
  d.a = a;
  d.b = b;
  return d;
}

BeliefDistribution BeliefDistribution::truncated_normal(TypeSpace s, double mu, double sigma) {
  BeliefDistribution d;
  d.kind = Kind::truncated_normal;
  d.support = s;
  d.mu = mu;
  d.sigma = sigma;
  return d;
}

double BeliefDistribution::cdf(double t) const {
  if (t <= support.lo) return 0.0;
  if (t >= support.hi) return 1.0;
  switch (kind) {
    case Kind::uniform:
      return (t - support.lo) / support.width();
    case Kind::beta: {
      const double u = (t - support.lo) / support.width();
      return boost::math::ibeta(a, b, u);
    }
    case Kind::truncated_normal: {
      const double zl = (support.lo - mu) / sigma;
      const double zh = (support.hi - mu) / sigma;
      const double z = (t - mu) / sigma;
      return (norm_cdf(z) - norm_cdf(zl)) / (norm_cdf(zh) - norm_cdf(zl));
    }
  }
  return 0.0;
}

double BeliefDistribution::density(double t) const {
  if (t < support.lo || t > support.hi) return 0.0;
  switch (kind) {
    case Kind::uniform:
      return 1.0 / support.width();
    case Kind::beta: {
      const double u = (t - support.lo) / support.width();
      return boost::math::ibeta_derivative(a, b, u) / support.width();
    }
    case Kind::truncated_normal: {
      const double zl = (support.lo - mu) / sigma;
      const double zh = (support.hi - mu) / sigma;
      const double z = (t - mu) / sigma;
      return norm_pdf(z) / (sigma * (norm_cdf(zh) - norm_cdf(zl)));
    }
  }
  return 0.0;
}

bool BeliefDistribution::endpoint_singular() const {
  return kind == Kind::beta && (a < 1.0 || b < 1.0);
}

std::vector<std::string> BeliefDistribution::check(const std::string& where) const {
  std::vector<std::string> errs;
  if (!(support.lo < support.hi)) errs.push_back(where + ": type space requires lo < hi");
  if (kind == Kind::beta && !(a > 0.0 && b > 0.0))
    errs.push_back(where + ": beta shape parameters must be positive");
  if (kind == Kind::truncated_normal) {
    if (!(sigma > 0.0)) errs.push_back(where + ": sigma must be positive");
    else if (support.lo < support.hi) {
      const double zl = (support.lo - mu) / sigma;
      const double zh = (support.hi - mu) / sigma;
      if (!(norm_cdf(zh) - norm_cdf(zl) > 0.0))
        errs.push_back(where + ": truncation window carries no probability mass");
    }
  }
  return errs;
}

// ---- ComponentFn ----

ComponentFn ComponentFn::affine(double slope, double intercept) {
  ComponentFn c;
  c.kind = Kind::affine;
  c.slope = slope;
  c.intercept = intercept;
  return c;
}

ComponentFn ComponentFn::tabulated(std::vector<double> xs, std::vector<double> ys) {
  ComponentFn c;
  c.kind = Kind::tabulated;
  c.xs = std::move(xs);
  c.ys = std::move(ys);
  return c;
}

double ComponentFn::operator()(double t) const {
  if (kind == Kind::affine) return slope * t + intercept;
  if (xs.size() < 2) return ys.empty() ? 0.0 : ys.front();
  const double tc = std::clamp(t, xs.front(), xs.back());
  auto it = std::upper_bound(xs.begin(), xs.end(), tc);
  size_t hi = std::min<size_t>(std::distance(xs.begin(), it), xs.size() - 1);
  if (hi == 0) hi = 1;
  const size_t lo = hi - 1;
  const double w = (tc - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

double ComponentFn::derivative(double t) const {
  if (kind == Kind::affine) return slope;
  const double h = 1e-5;
  const double lo = xs.empty() ? t - h : xs.front();
  const double hi = xs.empty() ? t + h : xs.back();
  const double tl = std::max(lo, t - h), th = std::min(hi, t + h);
  if (!(th > tl)) return 0.0;
  return ((*this)(th) - (*this)(tl)) / (th - tl);
}

std::vector<std::string> ComponentFn::check(const TypeSpace& domain,
                                            const std::string& where) const {
  std::vector<std::string> errs;
  if (kind == Kind::affine) {
    if (!(slope > 0.0)) errs.push_back(where + ": affine component must have positive slope");
    return errs;
  }
  if (xs.size() < 2 || xs.size() != ys.size()) {
    errs.push_back(where + ": tabulated component needs >= 2 matching nodes");
    return errs;
  }
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i + 1] > xs[i])) {
      errs.push_back(where + ": tabulated component nodes must be strictly increasing");
      break;
    }
  }
  for (size_t i = 0; i + 1 < ys.size(); ++i) {
    if (!(ys[i + 1] > ys[i])) {
      errs.push_back(where + ": tabulated component values must be strictly increasing");
      break;
    }
  }
  if (!xs.empty() && (xs.front() > domain.lo || xs.back() < domain.hi))
    errs.push_back(where + ": tabulated component does not cover the type space");
  return errs;
}

// ---- WarTechnology ----

double WarTechnology::win_probability(int i, double own, double opp) const {
  if (kind == Kind::one_sided_cost) return win_prob[i];
  return h[i](own) - g[i](opp) + base[i];
}

// ---- AudienceCostRule ----

AudienceCostRule AudienceCostRule::zero() { return AudienceCostRule{}; }

AudienceCostRule AudienceCostRule::affine(double slope, double intercept) {
  AudienceCostRule r;
  r.kind = Kind::affine;
  r.slope = slope;
  r.intercept = intercept;
  return r;
}

AudienceCostRule AudienceCostRule::tabulated(std::vector<double> x_nodes,
                                             std::vector<double> theta_nodes, Table values) {
  AudienceCostRule r;
  r.kind = Kind::tabulated;
  r.x_nodes = std::move(x_nodes);
  r.theta_nodes = std::move(theta_nodes);
  r.values = std::move(values);
  return r;
}

namespace {
// clamped 1-d locate for bilinear lookup
std::pair<size_t, double> locate(const std::vector<double>& nodes, double t) {
  if (nodes.size() < 2) return {0, 0.0};
  const double tc = std::clamp(t, nodes.front(), nodes.back());
  auto it = std::upper_bound(nodes.begin(), nodes.end(), tc);
  size_t hi = std::min<size_t>(std::distance(nodes.begin(), it), nodes.size() - 1);
  if (hi == 0) hi = 1;
  return {hi - 1, (tc - nodes[hi - 1]) / (nodes[hi] - nodes[hi - 1])};
}
}  // namespace

double AudienceCostRule::leader_value(double x, double theta) const {
  switch (kind) {
    case Kind::zero:
      return x;
    case Kind::affine:
      return slope * x + intercept;
    case Kind::tabulated: {
      if (x_nodes.size() < 2 || theta_nodes.size() < 2) return x;
      auto [r, wr] = locate(x_nodes, x);
      auto [c, wc] = locate(theta_nodes, theta);
      const double v00 = values.at((int)r, (int)c), v01 = values.at((int)r, (int)c + 1);
      const double v10 = values.at((int)r + 1, (int)c), v11 = values.at((int)r + 1, (int)c + 1);
      return (1 - wr) * ((1 - wc) * v00 + wc * v01) + wr * ((1 - wc) * v10 + wc * v11);
    }
  }
  return x;
}

std::vector<std::string> AudienceCostRule::check(const std::string& where) const {
  std::vector<std::string> errs;
  if (kind != Kind::tabulated) return errs;
  if (x_nodes.size() < 2 || theta_nodes.size() < 2)
    errs.push_back(where + ": tabulated audience cost needs >= 2 nodes per axis");
  else if (values.rows != (int)x_nodes.size() || values.cols != (int)theta_nodes.size())
    errs.push_back(where + ": tabulated audience cost table shape mismatch");
  for (size_t i = 0; i + 1 < x_nodes.size(); ++i)
    if (!(x_nodes[i + 1] > x_nodes[i])) {
      errs.push_back(where + ": audience cost x nodes must be strictly increasing");
      break;
    }
  for (size_t i = 0; i + 1 < theta_nodes.size(); ++i)
    if (!(theta_nodes[i + 1] > theta_nodes[i])) {
      errs.push_back(where + ": audience cost theta nodes must be strictly increasing");
      break;
    }
  return errs;
}

// ---- CrisisModel ----

double CrisisModel::leader_war_payoff(int i, double t1, double t2) const {
  require_in_rectangle(t1, t2);
  const double own = own_type(i, t1, t2), opp = opp_type(i, t1, t2);
  const double p = tech.win_probability(i, own, opp);
  if (tech.kind == WarTechnology::Kind::one_sided_cost)
    return p + states[i].lambda * own;  // c_i = -theta_i
  return p - states[i].lambda * tech.citizen_cost[i];
}

double CrisisModel::citizen_war_payoff(int i, double t1, double t2) const {
  require_in_rectangle(t1, t2);
  const double own = own_type(i, t1, t2), opp = opp_type(i, t1, t2);
  const double p = tech.win_probability(i, own, opp);
  if (tech.kind == WarTechnology::Kind::one_sided_cost) return p + own;
  return p - tech.citizen_cost[i];
}

double CrisisModel::leader_war_payoff_slope(int i, double t1, double t2) const {
  require_in_rectangle(t1, t2);
  if (tech.kind == WarTechnology::Kind::one_sided_cost) return states[i].lambda;
  return tech.h[i].derivative(own_type(i, t1, t2));
}

void CrisisModel::require_in_rectangle(double t1, double t2) const {
  if (!states[0].types.contains(t1) || !states[1].types.contains(t2))
    throw std::domain_error("type pair outside the type rectangle");
}

// ---- validation ----

std::vector<std::string> validate(const CrisisModel& m) {
  std::vector<std::string> errs;
  for (int i = 0; i < 2; ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    const StateSpec& s = m.states[i];
    if (!(s.types.lo < s.types.hi)) errs.push_back(where + ": type space requires lo < hi");
    if (!(s.gamma >= 0.0 && s.gamma <= 1.0)) errs.push_back(where + ": gamma out of range [0,1]");
    if (!(s.lambda > 0.0)) errs.push_back(where + ": lambda must be positive");
    if (s.belief.support.lo != s.types.lo || s.belief.support.hi != s.types.hi)
      errs.push_back(where + ": distribution support must match the type space");
    auto de = s.belief.check(where + ".distribution");
    errs.insert(errs.end(), de.begin(), de.end());
    auto ae = s.audience.check(where + ".audience_cost");
    errs.insert(errs.end(), ae.begin(), ae.end());
  }

  if (m.tech.kind == WarTechnology::Kind::one_sided_cost) {
    const double p1 = m.tech.win_prob[0], p2 = m.tech.win_prob[1];
    if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0))
      errs.push_back("war_technology: winning probability outside [0,1]");
    if (std::abs(p1 + p2 - 1.0) > 1e-12)
      errs.push_back("war_technology: winning probabilities must sum to 1");
  } else {
    for (int i = 0; i < 2; ++i) {
      auto he = m.tech.h[i].check(m.states[i].types, "war_technology.h[" + std::to_string(i) + "]");
      errs.insert(errs.end(), he.begin(), he.end());
      auto ge =
          m.tech.g[i].check(m.states[1 - i].types, "war_technology.g[" + std::to_string(i) + "]");
      errs.insert(errs.end(), ge.begin(), ge.end());
    }
  }
  if (!errs.empty()) return errs;  // probes below need a structurally sound model

  // probe grid: p bounds, adding-up, strict monotonicity of w in own type
  const int kProbe = 64;
  auto node = [&](int i, int k) {
    const TypeSpace& ts = m.states[i].types;
    return ts.lo + ts.width() * k / (kProbe - 1);
  };
  if (m.tech.kind == WarTechnology::Kind::two_sided_difference) {
    bool bad_p = false, bad_sum = false;
    for (int k = 0; k < kProbe && !(bad_p && bad_sum); ++k) {
      for (int l = 0; l < kProbe; ++l) {
        const double t1 = node(0, k), t2 = node(1, l);
        const double p1 = m.tech.win_probability(0, t1, t2);
        const double p2 = m.tech.win_probability(1, t2, t1);
        if (!bad_p && !(p1 >= -1e-12 && p1 <= 1.0 + 1e-12 && p2 >= -1e-12 && p2 <= 1.0 + 1e-12)) {
          errs.push_back("war_technology: winning probability outside [0,1] on the probe grid");
          bad_p = true;
        }
        if (!bad_sum && std::abs(p1 + p2 - 1.0) > 1e-9) {
          errs.push_back("war_technology: winning probabilities do not sum to 1 on the probe grid");
          bad_sum = true;
        }
      }
    }
  }
  for (int i = 0; i < 2 && errs.empty(); ++i) {
    const TypeSpace& opp = m.states[1 - i].types;
    for (int slice = 0; slice < 8 && errs.empty(); ++slice) {
      const double to = opp.lo + opp.width() * slice / 7.0;
      double prev = 0.0;
      for (int k = 0; k < kProbe; ++k) {
        const double own = node(i, k);
        const double t1 = i == 0 ? own : to, t2 = i == 0 ? to : own;
        const double w = m.states[i].lambda *
                             (m.tech.kind == WarTechnology::Kind::one_sided_cost
                                  ? own
                                  : -m.tech.citizen_cost[i]) +
                         m.tech.win_probability(i, m.own_type(i, t1, t2), m.opp_type(i, t1, t2));
        if (k > 0 && !(w > prev)) {
          errs.push_back("states[" + std::to_string(i) +
                         "]: leader war payoff not strictly increasing in own type");
          break;
        }
        prev = w;
      }
    }
  }
  return errs;
}

const CrisisModel& validated(const CrisisModel& m) {
  auto errs = validate(m);
  if (!errs.empty()) throw PreconditionError("invalid model: " + join(errs, "; "));
  return m;
}

}  // namespace pax
