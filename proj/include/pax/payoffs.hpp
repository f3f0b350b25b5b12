#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "pax/model.hpp"
#include "pax/quadrature.hpp"

namespace pax {

// Settlement rule as evaluable functions of the report pair (theta1, theta2).
// Mechanism tables convert to this form; tests can pass exact closed-form
// lambdas. kinks1/kinks2 list interior break points along each axis so the
// quadrature splits there instead of hunting for them.
struct OutcomeFn {
  std::function<double(double, double)> pi;
  std::function<double(double, double)> x1;
  std::function<double(double, double)> x2;
  std::vector<double> kinks1;
  std::vector<double> kinks2;

  double share(int i, double t1, double t2) const { return i == 0 ? x1(t1, t2) : x2(t1, t2); }
  const std::vector<double>& kinks(int axis) const { return axis == 0 ? kinks1 : kinks2; }
};

// ∫ f(θ_j) dF_j by adaptive quadrature with density weighting. Integrable
// endpoint singularities (beta with shape < 1) are handled by a thin endpoint
// sliver charged at cdf mass times the sliver's midpoint value.
// Throws QuadratureError when the evaluation budget runs out short of tol.
double integrate_over_opponent(const std::function<double(double)>& f,
                               const BeliefDistribution& dist, double tol = kQuadTol);
double integrate_over_opponent(const std::function<double(double)>& f,
                               const BeliefDistribution& dist,
                               std::span<const double> interior_breaks, double tol = kQuadTol);

// W_i(θ_i) = ∫ w_i(θ_i, θ_j) dF_j. Throws std::domain_error when theta_i is
// outside state i's type space.
double interim_war_payoff(const CrisisModel& m, int i, double theta_i, double tol = kQuadTol);

// W_i^c(θ_i) = ∫ w_i^c(θ_i, θ_j) dF_j.
double interim_citizen_war_payoff(const CrisisModel& m, int i, double theta_i,
                                  double tol = kQuadTol);

struct PeacePayoffs {
  double V = 0.0;  // leader value, audience-cost adjusted
  double X = 0.0;  // citizen value, the raw share
};

// V_i(θ_i) = ∫ v_i(x_i(θ), θ_i) dF_j and X_i(θ_i) = ∫ x_i(θ) dF_j.
PeacePayoffs interim_peace_payoffs(const CrisisModel& m, const OutcomeFn& out, int i,
                                   double theta_i, double tol = kQuadTol);

// U_i(θ̃|θ) = ∫ [π(θ̃,θ_j) w_i(θ,θ_j) + (1−π(θ̃,θ_j)) v_i(x_i(θ̃,θ_j), θ̃)] dF_j.
// The war term keeps the true type; the peace term is judged at the report,
// audience cost included.
double interim_utility_report(const CrisisModel& m, const OutcomeFn& out, int i, double report,
                              double true_type, double tol = kQuadTol);

// U_i(θ_i) = U_i(θ_i|θ_i)
double interim_utility_truthful(const CrisisModel& m, const OutcomeFn& out, int i, double theta_i,
                                double tol = kQuadTol);

// per-type interim values for one state on a fixed grid
struct InterimProfile {
  int state = 0;
  std::vector<double> theta_grid;
  std::vector<double> W, Wc, V, X, U;
};

// columns: theta,W,Wc,V,X,U
void write_csv(std::ostream& os, const InterimProfile& p);

}  // namespace pax
