#pragma once

#include "ihoc/linalg.hpp"

#include <string_view>
#include <vector>

namespace ihoc {

/// What the stored window assumes about states beyond the horizon.
enum class TailConvention {
  StatesToZero,    ///< reduced coordinates, x_t → 0
  StatesToTarget,  ///< original coordinates, y_t → y∞
};

std::string_view to_string(TailConvention tail);

/// A truncated state/control trajectory: states x_0..x_T, controls u_0..u_{T-1}.
///
/// Whenever a control at t = T is needed (the last payoff term, the last
/// costate step) the last stored control is held: u_T := u_{T-1}.
struct Process {
  std::vector<Vec> states;
  std::vector<Vec> controls;
  TailConvention tail = TailConvention::StatesToZero;
  /// Dynamics residual under which the process counts as feasible.
  double feasible_tol = 1e-10;

  [[nodiscard]] int horizon() const { return static_cast<int>(controls.size()); }
  [[nodiscard]] const Vec& state(int t) const;
  /// u_t for 0 <= t <= T with the hold convention at t = T.
  [[nodiscard]] const Vec& control(int t) const;

  /// Checks T >= 1, states.size() == T + 1 and the vector lengths.
  void validate(int n, int d) const;
};

}  // namespace ihoc
