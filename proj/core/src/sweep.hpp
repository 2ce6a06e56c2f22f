#pragma once

#include "ihoc/problem.hpp"
#include "ihoc/process.hpp"

#include <vector>

namespace ihoc::detail {

struct SweepResult {
  /// p[t] = p_t for t = 1..T+1; p[0] is unused.
  std::vector<Vec> p;
  /// ‖D₁f(x̂_t,û_t)‖ and ‖D₁φ(x̂_t,û_t)‖ for t = 1..T (index 0 unused).
  std::vector<double> d1f_norm;
  std::vector<double> d1phi_norm;
};

/// Backward costate recursion. `state_gradient_at_T`, when non-empty, is added
/// to p_T (terminal penalty terms).
SweepResult backward_sweep(const ReducedProblem& red, const Process& proc, const Vec& terminal,
                           const Vec& state_gradient_at_T, bool want_norms);

}  // namespace ihoc::detail
