#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "pax/common.hpp"

namespace pax {

inline constexpr double kQuadTol = 1e-8;
inline constexpr std::size_t kQuadBudget = std::size_t{1} << 16;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // accumulated estimate
  std::size_t evals = 0;
  bool converged = true;
};

// Adaptive composite Simpson with interval bisection on [a, b].
// Stops bisecting a segment once its Richardson error estimate meets the
// segment's tolerance share; stops globally when the evaluation budget is out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, std::size_t max_evals = kQuadBudget);

// Same, but the interval is first split at the given interior breakpoints
// (table kinks), each piece getting a width-proportional tolerance share.
QuadratureResult integrate_adaptive_split(const std::function<double(double)>& f, double a,
                                          double b, std::span<const double> interior_breaks,
                                          double abs_tol, std::size_t max_evals = kQuadBudget);

}  // namespace pax
