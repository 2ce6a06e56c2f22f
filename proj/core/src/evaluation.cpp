#include "ihoc/evaluation.hpp"

#include "ihoc/errors.hpp"
#include "sweep.hpp"

#include <algorithm>
#include <cmath>

namespace ihoc {

double discount(double beta, int t) { return std::pow(beta, t); }

double partial_objective(const ReducedProblem& red, const Process& proc) {
  proc.validate(red.n, red.d);
  double sum = 0.0;
  for (int t = 0; t <= proc.horizon(); ++t) {
    sum += discount(red.beta, t) * red.payoff(proc.state(t), proc.control(t));
  }
  return sum;
}

ObjectiveEstimate eval_J(const ReducedProblem& red, const Process& proc, std::size_t ball_samples) {
  red.validate();
  ObjectiveEstimate out;
  out.partial_sum = partial_objective(red, proc);

  double rho = 0.0;
  for (const Vec& x : proc.states) {
    rho = std::max(rho, x.norm());
  }
  rho *= 1.1;

  std::vector<Vec> xs{Vec::Zero(red.n)};
  for (int i = 0; i < red.n; ++i) {
    xs.push_back(rho * Vec::Unit(red.n, i));
    xs.push_back(-rho * Vec::Unit(red.n, i));
  }
  for (std::size_t h = 1; xs.size() < std::max<std::size_t>(ball_samples, xs.size()); ++h) {
    Vec v = 2.0 * halton(h, red.n).array() - 1.0;
    if (v.norm() > 1.0) {
      v.normalize();
    }
    xs.push_back(rho * v);
  }

  std::vector<Vec> us = proc.controls;
  Vec lo = us.front();
  Vec hi = us.front();
  for (const Vec& u : us) {
    lo = lo.cwiseMin(u);
    hi = hi.cwiseMax(u);
  }
  us.push_back(0.5 * (lo + hi));
  if (red.d <= 10) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << red.d); ++mask) {
      Vec c(red.d);
      for (int i = 0; i < red.d; ++i) {
        c[i] = ((mask >> i) & 1U) ? hi[i] : lo[i];
      }
      us.push_back(std::move(c));
    }
  }

  double sup = 0.0;
  for (const Vec& x : xs) {
    for (const Vec& u : us) {
      sup = std::max(sup, std::abs(red.payoff(x, u)));
    }
  }
  const int T = proc.horizon();
  out.tail_bound = discount(red.beta, T + 1) / (1.0 - red.beta) * sup;
  return out;
}

ResidualReport dynamics_residual(const ReducedProblem& red, const Process& proc) {
  proc.validate(red.n, red.d);
  ResidualReport out;
  for (int t = 0; t < proc.horizon(); ++t) {
    const double r = (proc.state(t + 1) - red.dynamics(proc.state(t), proc.control(t))).norm();
    if (r > out.max_residual) {
      out.max_residual = r;
      out.argmax_t = t;
    }
  }
  return out;
}

bool is_feasible(const ReducedProblem& red, const Process& proc) {
  return dynamics_residual(red, proc).max_residual <= proc.feasible_tol;
}

Process rollout(const ReducedProblem& red, const std::vector<Vec>& controls, double feasible_tol) {
  red.validate();
  if (controls.empty()) {
    throw PreconditionError("rollout needs at least one control");
  }
  Process proc;
  proc.feasible_tol = feasible_tol;
  proc.tail = TailConvention::StatesToZero;
  proc.controls = controls;
  proc.states.reserve(controls.size() + 1);
  proc.states.push_back(red.sigma);
  for (std::size_t t = 0; t < controls.size(); ++t) {
    require_size(controls[t], red.d, "control");
    if (!red.control_set.contains(controls[t], 1e-12)) {
      throw PreconditionError("control u_" + std::to_string(t) + " lies outside the control set");
    }
    proc.states.push_back(red.dynamics(proc.states.back(), controls[t]));
  }
  return proc;
}

std::vector<Vec> grad_J_controls(const ReducedProblem& red, const Process& proc,
                                 double terminal_penalty) {
  red.validate();
  proc.validate(red.n, red.d);
  if (!is_feasible(red, proc)) {
    throw PreconditionError("adjoint gradient needs a feasible process");
  }
  const int T = proc.horizon();
  Vec extra;
  if (terminal_penalty > 0.0) {
    extra = -2.0 * terminal_penalty * proc.state(T);
  }
  const detail::SweepResult sweep =
      detail::backward_sweep(red, proc, Vec::Zero(red.n), extra, false);

  std::vector<Vec> grad;
  grad.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const ScalarPartials dphi = red.payoff_partials(proc.state(t), proc.control(t));
    const VectorPartials df = red.dynamics_partials(proc.state(t), proc.control(t));
    grad.push_back(discount(red.beta, t) * dphi.du +
                   df.du.transpose() * sweep.p[static_cast<std::size_t>(t) + 1]);
  }
  // The held control u_T = u_{T-1} enters the last payoff term.
  grad.back() += discount(red.beta, T) * red.payoff_partials(proc.state(T), proc.control(T)).du;
  return grad;
}

}  // namespace ihoc
