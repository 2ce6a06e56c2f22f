#include "ihoc/process.hpp"

#include "ihoc/errors.hpp"

#include <string>

namespace ihoc {

std::string_view to_string(TailConvention tail) {
  return tail == TailConvention::StatesToZero ? "states-to-zero" : "states-to-target";
}

const Vec& Process::state(int t) const {
  if (t < 0 || t >= static_cast<int>(states.size())) {
    throw DimensionError("state index " + std::to_string(t) + " outside the stored window");
  }
  return states[static_cast<std::size_t>(t)];
}

const Vec& Process::control(int t) const {
  const int T = horizon();
  if (T == 0 || t < 0 || t > T) {
    throw DimensionError("control index " + std::to_string(t) + " outside the stored window");
  }
  return controls[static_cast<std::size_t>(t == T ? T - 1 : t)];
}

void Process::validate(int n, int d) const {
  if (controls.empty()) {
    throw DimensionError("process needs at least one control (T >= 1)");
  }
  if (states.size() != controls.size() + 1) {
    throw DimensionError("process must store T + 1 states for T controls");
  }
  for (const Vec& x : states) {
    require_size(x, n, "process state");
  }
  for (const Vec& u : controls) {
    require_size(u, d, "process control");
  }
}

}  // namespace ihoc
