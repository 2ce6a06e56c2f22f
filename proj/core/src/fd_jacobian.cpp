#include "ihoc/fd_jacobian.hpp"

#include "ihoc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ihoc {

namespace {

Vec evaluate(const VecFunction& map, const Vec& at) {
  Vec out = map(at);
  if (!out.allFinite()) {
    throw EvaluationError("finite differences: map returned a non-finite value");
  }
  return out;
}

}  // namespace

double default_fd_step(const Vec& point) { return std::max(1e-6, 1e-7 * point.norm()); }

Mat fd_jacobian(const VecFunction& map, const Vec& point, double step, const FdBounds& bounds) {
  if (!point.allFinite()) {
    throw EvaluationError("finite differences: non-finite evaluation point");
  }
  const double h = step > 0.0 ? step : default_fd_step(point);
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw PreconditionError("finite differences: invalid step");
  }
  const bool bounded = bounds.lower.size() == point.size() && bounds.upper.size() == point.size();

  const Vec center = evaluate(map, point);
  Mat jac(center.size(), point.size());
  for (Eigen::Index j = 0; j < point.size(); ++j) {
    // Snap the step to a representable increment so the denominator is exact.
    Vec plus = point;
    Vec minus = point;
    plus[j] = point[j] + h;
    minus[j] = point[j] - h;
    double up = plus[j] - point[j];
    double down = point[j] - minus[j];
    if (up == 0.0 || down == 0.0) {
      throw PreconditionError("finite differences: step " + std::to_string(h) +
                              " underflows at coordinate " + std::to_string(j));
    }
    const bool room_up = !bounded || plus[j] <= bounds.upper[j];
    const bool room_down = !bounded || minus[j] >= bounds.lower[j];
    if (room_up && room_down) {
      jac.col(j) = (evaluate(map, plus) - evaluate(map, minus)) / (up + down);
    } else if (room_up) {
      jac.col(j) = (evaluate(map, plus) - center) / up;
    } else if (room_down) {
      jac.col(j) = (center - evaluate(map, minus)) / down;
    } else {
      // Degenerate interval narrower than the step: the coordinate is pinned.
      jac.col(j).setZero();
    }
  }
  return jac;
}

}  // namespace ihoc
