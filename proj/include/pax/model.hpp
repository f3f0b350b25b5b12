#pragma once

#include <array>
#include <string>
#include <vector>

#include "pax/common.hpp"

namespace pax {

struct TypeSpace {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
};

// belief over the opponent's type; cdf/density evaluators clamped to the support
struct BeliefDistribution {
  enum class Kind { uniform, beta, truncated_normal };

  Kind kind = Kind::uniform;
  TypeSpace support;
  double a = 1.0, b = 1.0;      // beta shapes
  double mu = 0.0, sigma = 1.0; // truncated normal, in type units

  static BeliefDistribution uniform(TypeSpace s);
  static BeliefDistribution beta(TypeSpace s, double a, double b);
  static BeliefDistribution truncated_normal(TypeSpace s, double mu, double sigma);

  double cdf(double t) const;
  double density(double t) const;
  double mass(double from, double to) const { return cdf(to) - cdf(from); }
  // true when the density blows up at an endpoint (beta with a<1 or b<1)
  bool endpoint_singular() const;
  std::vector<std::string> check(const std::string& where) const;
};

// scalar component of the two-sided technology (h_i, g_i): affine or piecewise linear
struct ComponentFn {
  enum class Kind { affine, tabulated };

  Kind kind = Kind::affine;
  double slope = 1.0, intercept = 0.0;
  std::vector<double> xs, ys;  // tabulated nodes, strictly increasing in both

  static ComponentFn affine(double slope, double intercept);
  static ComponentFn tabulated(std::vector<double> xs, std::vector<double> ys);

  double operator()(double t) const;
  // affine: exact; tabulated: central finite difference with step 1e-5
  double derivative(double t) const;
  std::vector<std::string> check(const TypeSpace& domain, const std::string& where) const;
};

struct WarTechnology {
  enum class Kind { one_sided_cost, two_sided_difference };

  Kind kind = Kind::two_sided_difference;
  // one-sided-cost: fixed winning probabilities, type is the negated fighting cost
  std::array<double, 2> win_prob{0.5, 0.5};
  // two-sided-difference: p_i = h_i(own) - g_i(opp) + base_i, constant citizen costs
  std::array<ComponentFn, 2> h{};
  std::array<ComponentFn, 2> g{};
  std::array<double, 2> base{0.0, 0.0};
  std::array<double, 2> citizen_cost{0.0, 0.0};

  double win_probability(int i, double own, double opp) const;
};

struct AudienceCostRule {
  enum class Kind { zero, affine, tabulated };

  Kind kind = Kind::zero;
  double slope = 1.0, intercept = 0.0;  // affine: v = slope*x + intercept
  // tabulated: bilinear in (x, theta)
  std::vector<double> x_nodes, theta_nodes;
  Table values;

  static AudienceCostRule zero();
  static AudienceCostRule affine(double slope, double intercept);
  static AudienceCostRule tabulated(std::vector<double> x_nodes, std::vector<double> theta_nodes,
                                    Table values);

  // leader peace payoff v_i from settlement share x at reported type theta
  double leader_value(double x, double theta) const;
  std::vector<std::string> check(const std::string& where) const;
};

struct StateSpec {
  TypeSpace types;
  BeliefDistribution belief;   // opponent's belief about THIS state's type
  double gamma = 1.0;          // leader population share
  double lambda = 1.0;         // political bias
  AudienceCostRule audience;
};

// the full primitive bundle; resource normalized to 1
struct CrisisModel {
  std::array<StateSpec, 2> states;
  WarTechnology tech;
  static constexpr double kResource = 1.0;

  const TypeSpace& type_space(int i) const { return states[i].types; }
  // distribution of state j's type as seen by state i (j = 1-i)
  const BeliefDistribution& opponent_belief(int i) const { return states[1 - i].belief; }

  double own_type(int i, double t1, double t2) const { return i == 0 ? t1 : t2; }
  double opp_type(int i, double t1, double t2) const { return i == 0 ? t2 : t1; }

  // w_i = p_i - lambda_i c_i
  double leader_war_payoff(int i, double t1, double t2) const;
  // w_i^c = p_i - c_i
  double citizen_war_payoff(int i, double t1, double t2) const;
  // d w_i / d theta_i
  double leader_war_payoff_slope(int i, double t1, double t2) const;

  void require_in_rectangle(double t1, double t2) const;  // throws std::domain_error
};

// all per-field diagnostics; empty result means the model is valid.
// Includes the 64-point strict-monotonicity probe of w_i in own type and the
// p_i in [0,1] / p1+p2 = 1 probes for the two-sided technology.
std::vector<std::string> validate(const CrisisModel& m);

// convenience: returns m or throws PreconditionError listing the diagnostics
const CrisisModel& validated(const CrisisModel& m);

}  // namespace pax
