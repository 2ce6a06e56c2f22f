#include "ihoc/problem.hpp"

#include "ihoc/errors.hpp"
#include "ihoc/fd_jacobian.hpp"

#include <cmath>
#include <limits>

namespace ihoc {

namespace {

void validate_common(int n, int d, double beta, const ControlSet& set) {
  if (n <= 0 || d <= 0) {
    throw DimensionError("state and control dimensions must be positive");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw PreconditionError("discount factor must satisfy 0 < beta < 1");
  }
  if (set.dim() != d) {
    throw DimensionError("control set dimension does not match d");
  }
}

FdBounds stacked_bounds(const ReducedProblem& p) {
  const double inf = std::numeric_limits<double>::infinity();
  FdBounds b;
  b.lower = Vec::Constant(p.n + p.d, -inf);
  b.upper = Vec::Constant(p.n + p.d, inf);
  if (p.control_set.kind() == ControlSetKind::Box) {
    b.lower.tail(p.d) = p.control_set.lower();
    b.upper.tail(p.d) = p.control_set.upper();
  }
  return b;
}

Vec stack(const Vec& x, const Vec& u) {
  Vec z(x.size() + u.size());
  z << x, u;
  return z;
}

}  // namespace

void ProblemSpec::validate() const {
  validate_common(n, d, beta, control_set);
  require_size(eta, n, "eta");
  require_size(y_inf, n, "y_inf");
  if (!psi || !g) {
    throw PreconditionError("problem needs payoff and dynamics handles");
  }
}

void ReducedProblem::validate() const {
  validate_common(n, d, beta, control_set);
  require_size(sigma, n, "sigma");
  require_size(origin_shift, n, "origin shift");
  if (!phi || !f) {
    throw PreconditionError("problem needs payoff and dynamics handles");
  }
}

double ReducedProblem::payoff(const Vec& x, const Vec& u) const {
  require_size(x, n, "state");
  require_size(u, d, "control");
  const double v = phi(x, u);
  if (!std::isfinite(v)) {
    throw EvaluationError("payoff returned a non-finite value");
  }
  return v;
}

Vec ReducedProblem::dynamics(const Vec& x, const Vec& u) const {
  require_size(x, n, "state");
  require_size(u, d, "control");
  Vec next = f(x, u);
  require_size(next, n, "dynamics output");
  if (!next.allFinite()) {
    throw EvaluationError("dynamics returned a non-finite value");
  }
  return next;
}

ScalarPartials ReducedProblem::payoff_partials(const Vec& x, const Vec& u) const {
  if (!phi_jac) {
    return fd_payoff_partials(x, u);
  }
  require_size(x, n, "state");
  require_size(u, d, "control");
  ScalarPartials j = phi_jac(x, u);
  require_size(j.dx, n, "payoff D1");
  require_size(j.du, d, "payoff D2");
  if (!j.dx.allFinite() || !j.du.allFinite()) {
    throw EvaluationError("payoff partials are not finite");
  }
  return j;
}

VectorPartials ReducedProblem::dynamics_partials(const Vec& x, const Vec& u) const {
  if (!f_jac) {
    return fd_dynamics_partials(x, u);
  }
  require_size(x, n, "state");
  require_size(u, d, "control");
  VectorPartials j = f_jac(x, u);
  require_shape(j.dx, n, n, "dynamics D1");
  require_shape(j.du, n, d, "dynamics D2");
  if (!j.dx.allFinite() || !j.du.allFinite()) {
    throw EvaluationError("dynamics partials are not finite");
  }
  return j;
}

ScalarPartials ReducedProblem::fd_payoff_partials(const Vec& x, const Vec& u, double step) const {
  require_size(x, n, "state");
  require_size(u, d, "control");
  const Eigen::Index nn = n;
  const Eigen::Index dd = d;
  const VecFunction map = [this, nn, dd](const Vec& z) {
    return Vec::Constant(1, phi(z.head(nn), z.tail(dd)));
  };
  const Mat jac = fd_jacobian(map, stack(x, u), step, stacked_bounds(*this));
  return {jac.row(0).head(nn).transpose(), jac.row(0).tail(dd).transpose()};
}

VectorPartials ReducedProblem::fd_dynamics_partials(const Vec& x, const Vec& u, double step) const {
  require_size(x, n, "state");
  require_size(u, d, "control");
  const Eigen::Index nn = n;
  const Eigen::Index dd = d;
  const VecFunction map = [this, nn, dd](const Vec& z) { return f(z.head(nn), z.tail(dd)); };
  const Mat jac = fd_jacobian(map, stack(x, u), step, stacked_bounds(*this));
  return {jac.leftCols(nn), jac.rightCols(dd)};
}

ReducedProblem original_view(const ProblemSpec& spec) {
  spec.validate();
  ReducedProblem view;
  view.n = spec.n;
  view.d = spec.d;
  view.beta = spec.beta;
  view.sigma = spec.eta;
  view.origin_shift = Vec::Zero(spec.n);
  view.phi = spec.psi;
  view.f = spec.g;
  view.phi_jac = spec.psi_jac;
  view.f_jac = spec.g_jac;
  view.control_set = spec.control_set;
  return view;
}

}  // namespace ihoc
