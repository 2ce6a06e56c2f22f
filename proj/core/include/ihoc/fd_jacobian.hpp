#pragma once

#include "ihoc/linalg.hpp"

#include <functional>

namespace ihoc {

using VecFunction = std::function<Vec(const Vec&)>;

/// max(1e-6, 1e-7·‖point‖).
double default_fd_step(const Vec& point);

/// Optional coordinate bounds for finite differencing. Coordinates whose
/// central stencil would leave [lower, upper] fall back to a one-sided
/// difference. Empty vectors mean unbounded.
struct FdBounds {
  Vec lower;
  Vec upper;
};

/// Central-difference Jacobian of `map` at `point`. `step <= 0` selects
/// default_fd_step. Throws EvaluationError on non-finite evaluations and
/// PreconditionError when the step underflows relative to the point.
Mat fd_jacobian(const VecFunction& map, const Vec& point, double step = 0.0,
                const FdBounds& bounds = {});

}  // namespace ihoc
