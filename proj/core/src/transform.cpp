#include "ihoc/transform.hpp"

#include "ihoc/errors.hpp"

namespace ihoc {

ReducedProblem reduce(const ProblemSpec& spec) {
  spec.validate();
  ReducedProblem red;
  red.n = spec.n;
  red.d = spec.d;
  red.beta = spec.beta;
  red.sigma = spec.eta - spec.y_inf;
  red.origin_shift = spec.y_inf;
  red.control_set = spec.control_set;

  const Vec shift = spec.y_inf;
  red.phi = [psi = spec.psi, shift](const Vec& x, const Vec& u) { return psi(x + shift, u); };
  red.f = [g = spec.g, shift](const Vec& x, const Vec& u) -> Vec { return g(x + shift, u) - shift; };
  if (spec.psi_jac) {
    red.phi_jac = [jac = spec.psi_jac, shift](const Vec& x, const Vec& u) { return jac(x + shift, u); };
  }
  if (spec.g_jac) {
    red.f_jac = [jac = spec.g_jac, shift](const Vec& x, const Vec& u) { return jac(x + shift, u); };
  }
  return red;
}

namespace {

Process shifted(const Process& in, const Vec& offset, TailConvention expected, TailConvention result,
                int n, int d) {
  in.validate(n, d);
  if (in.tail != expected) {
    throw PreconditionError(std::string("process is expected in ") + std::string(to_string(expected)) +
                            " coordinates");
  }
  Process out = in;
  for (Vec& x : out.states) {
    x += offset;
  }
  out.tail = result;
  return out;
}

}  // namespace

Process to_reduced(const Process& original, const ProblemSpec& spec) {
  spec.validate();
  return shifted(original, -spec.y_inf, TailConvention::StatesToTarget, TailConvention::StatesToZero,
                 spec.n, spec.d);
}

Process lift_process(const Process& reduced, const ProblemSpec& spec) {
  spec.validate();
  return shifted(reduced, spec.y_inf, TailConvention::StatesToZero, TailConvention::StatesToTarget,
                 spec.n, spec.d);
}

}  // namespace ihoc
