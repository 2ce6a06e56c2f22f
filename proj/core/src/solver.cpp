#include "ihoc/solver.hpp"

#include "ihoc/errors.hpp"
#include "ihoc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ihoc {

void SolveOptions::validate() const {
  if (T < 1) {
    throw PreconditionError("horizon T must be >= 1");
  }
  if (max_iters < 0) {
    throw PreconditionError("max_iters must be >= 0");
  }
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw PreconditionError("step_size must be positive");
  }
  if (!(shrink > 0.0 && shrink < 1.0) || !(growth >= 1.0)) {
    throw PreconditionError("backtracking needs 0 < shrink < 1 <= growth");
  }
  if (!(stop_tol > 0.0)) {
    throw PreconditionError("stop_tol must be positive");
  }
  if (terminal_penalty && !(*terminal_penalty >= 0.0)) {
    throw PreconditionError("terminal_penalty must be >= 0");
  }
}

double default_terminal_penalty(const ReducedProblem& red) {
  std::vector<Vec> us;
  if (red.control_set.compact()) {
    us = red.control_set.sample(16);
  } else if (red.control_set.star_center()) {
    us.push_back(*red.control_set.star_center());
  } else {
    us.push_back(red.control_set.project(Vec::Zero(red.d)));
  }
  const Vec zero = Vec::Zero(red.n);
  for (const Vec& u : us) {
    if (spectral_norm(red.dynamics_partials(zero, u).dx) >= 1.0) {
      return 1.0;
    }
  }
  return 0.0;
}

namespace {

double stacked_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += (a[i] - b[i]).squaredNorm();
  }
  return std::sqrt(s);
}

std::vector<Vec> project_step(const ControlSet& set, const std::vector<Vec>& u, const std::vector<Vec>& g,
                              double step) {
  std::vector<Vec> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = set.project(u[i] + step * g[i]);
  }
  return out;
}

double penalized_objective(const ReducedProblem& red, const Process& proc, double c) {
  double j = partial_objective(red, proc);
  if (c > 0.0) {
    j -= c * proc.states.back().squaredNorm();
  }
  return j;
}

}  // namespace

SolveResult solve_truncated(const ReducedProblem& red, const SolveOptions& opts,
                            std::vector<Vec> initial_controls) {
  red.validate();
  opts.validate();
  const ControlSet& set = red.control_set;
  if (!set.projectable()) {
    throw PreconditionError("projected gradient needs a box or convex-polytope control set");
  }
  if (initial_controls.empty()) {
    const Vec u0 = set.star_center() ? *set.star_center() : set.project(Vec::Zero(red.d));
    initial_controls.assign(static_cast<std::size_t>(opts.T), u0);
  }
  if (static_cast<int>(initial_controls.size()) != opts.T) {
    throw DimensionError("initial controls must have length T");
  }

  SolveResult res;
  res.terminal_penalty = opts.terminal_penalty.value_or(default_terminal_penalty(red));
  const double c = res.terminal_penalty;

  std::vector<Vec> u = std::move(initial_controls);
  Process proc = rollout(red, u);
  double obj = penalized_objective(red, proc, c);

  const bool singleton = set.kind() == ControlSetKind::Box && (set.upper() - set.lower()).cwiseAbs().maxCoeff() == 0.0;
  if (singleton) {
    res.process = std::move(proc);
    res.objective = obj;
    res.converged = true;
    return res;
  }

  double step = opts.step_size;
  std::vector<Vec> g = grad_J_controls(red, proc, c);
  double pg = stacked_distance(project_step(set, u, g, 1.0), u);
  for (int it = 0;; ++it) {
    res.trace.push_back({it, obj, pg, step});
    res.projected_gradient_norm = pg;
    res.iterations = it;
    if (pg <= opts.stop_tol) {
      res.converged = true;
      break;
    }
    if (it >= opts.max_iters) {
      break;
    }
    if (opts.rule == StepRule::Fixed) {
      u = project_step(set, u, g, step);
      proc = rollout(red, u);
      obj = penalized_objective(red, proc, c);
      g = grad_J_controls(red, proc, c);
      pg = stacked_distance(project_step(set, u, g, 1.0), u);
      continue;
    }
    // Changes below `noise` are decided by the projected-gradient norm instead.
    const double noise = 1e-13 * (1.0 + std::abs(obj));
    bool accepted = false;
    for (double s = step; s > 1e-20; s *= opts.shrink) {
      std::vector<Vec> trial = project_step(set, u, g, s);
      Process trial_proc = rollout(red, trial);
      const double trial_obj = penalized_objective(red, trial_proc, c);
      if (trial_obj < obj - noise) {
        continue;
      }
      std::vector<Vec> trial_g = grad_J_controls(red, trial_proc, c);
      const double trial_pg = stacked_distance(project_step(set, trial, trial_g, 1.0), trial);
      if (trial_obj <= obj + noise && trial_pg >= pg) {
        continue;
      }
      u = std::move(trial);
      proc = std::move(trial_proc);
      obj = trial_obj;
      g = std::move(trial_g);
      pg = trial_pg;
      step = s * opts.growth;
      accepted = true;
      break;
    }
    if (!accepted) {
      break;
    }
  }
  res.process = std::move(proc);
  res.objective = obj;
  return res;
}

void LQParams::validate() const {
  for (const double v : {a, b, q, r, beta, sigma}) {
    if (!std::isfinite(v)) {
      throw PreconditionError("LQ parameters must be finite");
    }
  }
  if (!(q >= 0.0) || !(r > 0.0)) {
    throw PreconditionError("LQ parameters need q >= 0 and r > 0");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw PreconditionError("LQ parameters need 0 < beta < 1");
  }
}

RiccatiSolution lq_riccati(const LQParams& params) {
  params.validate();
  const double a = params.a;
  const double b = params.b;
  const double beta = params.beta;
  const auto step = [&](double P) {
    const double k = beta * a * b * P;
    return params.q + beta * a * a * P - k * k / (params.r + beta * b * b * P);
  };
  RiccatiSolution sol;
  double P = params.q;
  constexpr int kMaxIters = 1000000;
  for (int it = 1; it <= kMaxIters; ++it) {
    const double next = step(P);
    if (!std::isfinite(next) || next > 1e300) {
      throw ConvergenceError("Riccati iteration diverged");
    }
    const double change = std::abs(next - P);
    P = next;
    sol.iterations = it;
    if (change <= 1e-14 * std::max(std::abs(P), std::numeric_limits<double>::min())) {
      break;
    }
    if (it == kMaxIters) {
      throw ConvergenceError("Riccati iteration did not converge");
    }
  }
  sol.P = P;
  sol.K = beta * a * b * P / (params.r + beta * b * b * P);
  sol.closed_loop = a - b * sol.K;
  return sol;
}

ReducedProblem make_lq_problem(const LQParams& params, ControlSet control_set) {
  params.validate();
  if (control_set.dim() != 1) {
    throw DimensionError("scalar LQ needs a one-dimensional control set");
  }
  const double a = params.a;
  const double b = params.b;
  const double q = params.q;
  const double r = params.r;
  ReducedProblem red;
  red.n = 1;
  red.d = 1;
  red.beta = params.beta;
  red.sigma = Vec::Constant(1, params.sigma);
  red.origin_shift = Vec::Zero(1);
  red.phi = [q, r](const Vec& x, const Vec& u) { return -(q * x[0] * x[0] + r * u[0] * u[0]); };
  red.f = [a, b](const Vec& x, const Vec& u) { return Vec::Constant(1, a * x[0] + b * u[0]); };
  red.phi_jac = [q, r](const Vec& x, const Vec& u) {
    return ScalarPartials{Vec::Constant(1, -2.0 * q * x[0]), Vec::Constant(1, -2.0 * r * u[0])};
  };
  red.f_jac = [a, b](const Vec&, const Vec&) {
    return VectorPartials{Mat::Constant(1, 1, a), Mat::Constant(1, 1, b)};
  };
  red.control_set = std::move(control_set);
  red.validate();
  return red;
}

Process lq_closed_loop(const LQParams& params, int T) {
  if (T < 1) {
    throw PreconditionError("horizon T must be >= 1");
  }
  const RiccatiSolution sol = lq_riccati(params);
  Process proc;
  proc.states.reserve(static_cast<std::size_t>(T) + 1);
  proc.controls.reserve(static_cast<std::size_t>(T));
  double x = params.sigma;
  proc.states.push_back(Vec::Constant(1, x));
  for (int t = 0; t < T; ++t) {
    const double u = -sol.K * x;
    proc.controls.push_back(Vec::Constant(1, u));
    x = params.a * x + params.b * u;
    proc.states.push_back(Vec::Constant(1, x));
  }
  return proc;
}

SearchResult exhaustive_search(const ReducedProblem& red, int T, std::vector<Vec> grid) {
  red.validate();
  if (T < 1) {
    throw PreconditionError("horizon T must be >= 1");
  }
  if (T > 6) {
    throw CapExceeded("exhaustive search is capped at T <= 6");
  }
  if (grid.empty()) {
    throw PreconditionError("exhaustive search needs a nonempty grid");
  }
  if (static_cast<double>(grid.size()) > std::pow(7.0, static_cast<double>(red.d))) {
    throw CapExceeded("exhaustive search is capped at 7^d grid points per stage");
  }
  for (const Vec& u : grid) {
    require_size(u, red.d, "grid point");
    if (!red.control_set.contains(u, 1e-10)) {
      throw PreconditionError("grid point outside the control set");
    }
  }
  std::sort(grid.begin(), grid.end(), [](const Vec& l, const Vec& r) {
    return std::lexicographical_compare(l.data(), l.data() + l.size(), r.data(), r.data() + r.size());
  });

  const std::size_t m = grid.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(T), 0);
  std::vector<std::size_t> best_idx = idx;
  std::vector<Vec> xs(static_cast<std::size_t>(T) + 1);
  // prefix[t] = Σ_{s<t} βˢ φ(x_s, u_s)
  std::vector<double> prefix(static_cast<std::size_t>(T) + 1, 0.0);
  xs[0] = red.sigma;
  double best = -std::numeric_limits<double>::infinity();
  SearchResult res;

  int depth = 0;
  while (depth >= 0) {
    const auto t = static_cast<std::size_t>(depth);
    if (idx[t] == m) {
      idx[t] = 0;
      --depth;
      if (depth >= 0) {
        ++idx[static_cast<std::size_t>(depth)];
      }
      continue;
    }
    const Vec& u = grid[idx[t]];
    prefix[t + 1] = prefix[t] + discount(red.beta, depth) * red.payoff(xs[t], u);
    xs[t + 1] = red.dynamics(xs[t], u);
    if (depth + 1 < T) {
      ++depth;
      continue;
    }
    const double j = prefix[t + 1] + discount(red.beta, T) * red.payoff(xs[t + 1], u);
    ++res.evaluated;
    if (j > best) {
      best = j;
      best_idx = idx;
    }
    ++idx[t];
  }

  std::vector<Vec> controls;
  controls.reserve(best_idx.size());
  for (const std::size_t i : best_idx) {
    controls.push_back(grid[i]);
  }
  res.best = rollout(red, controls);
  res.objective = partial_objective(red, res.best);
  return res;
}

}  // namespace ihoc
