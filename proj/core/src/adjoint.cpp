#include "ihoc/adjoint.hpp"

#include "ihoc/errors.hpp"
#include "ihoc/evaluation.hpp"
#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ihoc {

namespace detail {

SweepResult backward_sweep(const ReducedProblem& red, const Process& proc, const Vec& terminal,
                           const Vec& state_gradient_at_T, bool want_norms) {
  const int T = proc.horizon();
  SweepResult out;
  out.p.assign(static_cast<std::size_t>(T) + 2, Vec());
  out.p[static_cast<std::size_t>(T) + 1] = terminal;
  if (want_norms) {
    out.d1f_norm.assign(static_cast<std::size_t>(T) + 1, 0.0);
    out.d1phi_norm.assign(static_cast<std::size_t>(T) + 1, 0.0);
  }
  for (int t = T; t >= 1; --t) {
    const auto k = static_cast<std::size_t>(t);
    const VectorPartials df = red.dynamics_partials(proc.state(t), proc.control(t));
    const ScalarPartials dphi = red.payoff_partials(proc.state(t), proc.control(t));
    out.p[k] = df.dx.transpose() * out.p[k + 1] + discount(red.beta, t) * dphi.dx;
    if (t == T && state_gradient_at_T.size() == red.n) {
      out.p[k] += state_gradient_at_T;
    }
    if (want_norms) {
      out.d1f_norm[k] = spectral_norm(df.dx);
      out.d1phi_norm[k] = dphi.dx.norm();
    }
  }
  return out;
}

}  // namespace detail

namespace {

void require_matching(const ReducedProblem& red, const Process& proc, const CostateSeq& costates) {
  red.validate();
  proc.validate(red.n, red.d);
  if (costates.p.first_index != 1 || costates.horizon() != proc.horizon()) {
    throw PreconditionError("costates p_1..p_{T+1} missing or horizon mismatch with the process");
  }
  for (const Vec& p : costates.p.values) {
    require_size(p, red.n, "costate");
  }
}

std::vector<Vec> sample_controls(const ControlSet& set, std::size_t samples) {
  if (!set.compact() && set.kind() != ControlSetKind::FiniteGrid) {
    throw PreconditionError("control set cannot be sampled: it is not compact");
  }
  return set.sample(samples);
}

}  // namespace

double CostateSeq::l1_tail_bound() const {
  if (!tail) {
    return std::numeric_limits<double>::infinity();
  }
  const int T = horizon();
  const double rate = tail->rate;
  const double missing = tail->constant * std::pow(rate, T + 2) / (1.0 - rate);
  const double propagated = tail->constant * std::pow(rate, T + 1) * (1.0 + terminal_sensitivity);
  return missing + propagated;
}

double hamiltonian(const ReducedProblem& red, int t, const Vec& x, const Vec& u, const Vec& p_next) {
  require_size(p_next, red.n, "costate");
  return discount(red.beta, t) * red.payoff(x, u) + p_next.dot(red.dynamics(x, u));
}

CostateSeq compute_costates(const ReducedProblem& red, const Process& proc,
                            const std::optional<Vec>& p_terminal) {
  red.validate();
  proc.validate(red.n, red.d);
  if (!is_feasible(red, proc)) {
    throw PreconditionError("costates need a feasible process (dynamics residual above tolerance)");
  }
  const Vec terminal = p_terminal.value_or(Vec::Zero(red.n));
  require_size(terminal, red.n, "terminal costate");

  const int T = proc.horizon();
  detail::SweepResult sweep = detail::backward_sweep(red, proc, terminal, Vec(), true);

  CostateSeq out;
  out.terminal = terminal;
  out.p.first_index = 1;
  out.p.values.assign(sweep.p.begin() + 1, sweep.p.end());
  for (const Vec& p : out.p.values) {
    if (!p.allFinite()) {
      throw EvaluationError("costate recursion produced non-finite values");
    }
    out.l1_partial += p.norm();
  }

  double product = 1.0;
  for (int t = T; t >= 1; --t) {
    product *= sweep.d1f_norm[static_cast<std::size_t>(t)];
    out.terminal_sensitivity += product;
  }

  if (terminal.isZero(0.0)) {
    // Longest suffix on which D₁f is contractive.
    constexpr double kMargin = 1e-6;
    int onset = T + 1;
    double contraction = 0.0;
    double source = 0.0;
    for (int t = T; t >= 1; --t) {
      const auto k = static_cast<std::size_t>(t);
      if (sweep.d1f_norm[k] > 1.0 - kMargin) {
        break;
      }
      onset = t;
      contraction = std::max(contraction, sweep.d1f_norm[k]);
      source = std::max(source, sweep.d1phi_norm[k]);
    }
    if (onset <= T) {
      TailCertificate cert;
      cert.rate = red.beta;
      cert.contraction = contraction;
      cert.onset = onset;
      cert.constant = source / (1.0 - contraction * red.beta);
      bool holds = true;
      for (int t = onset; t <= T + 1; ++t) {
        if (out.at(t).norm() > cert.constant * std::pow(cert.rate, t) * (1.0 + 1e-12) + 1e-300) {
          holds = false;
          break;
        }
      }
      if (holds) {
        out.tail = cert;
      }
    }
  }
  return out;
}

PrincipleReport check_AE(const ReducedProblem& red, const Process& proc, const CostateSeq& costates,
                         double tol) {
  require_matching(red, proc, costates);
  PrincipleReport rep;
  rep.name = "AE";
  rep.tolerance = tol;
  const int T = proc.horizon();
  rep.per_t.assign(static_cast<std::size_t>(T) + 1, 0.0);
  for (int t = 1; t <= T; ++t) {
    const VectorPartials df = red.dynamics_partials(proc.state(t), proc.control(t));
    const ScalarPartials dphi = red.payoff_partials(proc.state(t), proc.control(t));
    const Vec expected = df.dx.transpose() * costates.at(t + 1) + discount(red.beta, t) * dphi.dx;
    const double r = (costates.at(t) - expected).norm();
    rep.per_t[static_cast<std::size_t>(t)] = r;
    if (t == 1 || r > rep.worst) {
      rep.worst = r;
      rep.worst_t = t;
    }
    ++rep.samples_used;
  }
  rep.passed = rep.worst <= tol;
  rep.note = "control at t = T held equal to u_{T-1}";
  return rep;
}

PrincipleReport check_WM(const ReducedProblem& red, const Process& proc, const CostateSeq& costates,
                         double tol, std::size_t samples) {
  require_matching(red, proc, costates);
  const std::vector<Vec> us = sample_controls(red.control_set, samples);
  PrincipleReport rep;
  rep.name = "WM";
  rep.tolerance = tol;
  const int T = proc.horizon();
  rep.per_t.assign(static_cast<std::size_t>(T), 0.0);
  for (int t = 0; t < T; ++t) {
    const Vec& x = proc.state(t);
    const Vec& u_hat = proc.control(t);
    const VectorPartials df = red.dynamics_partials(x, u_hat);
    const ScalarPartials dphi = red.payoff_partials(x, u_hat);
    const Vec direction = discount(red.beta, t) * dphi.du + df.du.transpose() * costates.at(t + 1);
    double worst_here = 0.0;
    const Vec* arg = nullptr;
    for (const Vec& u : us) {
      const double v = direction.dot(u - u_hat);
      if (v > worst_here) {
        worst_here = v;
        arg = &u;
      }
      ++rep.samples_used;
    }
    rep.per_t[static_cast<std::size_t>(t)] = worst_here;
    if (worst_here > rep.worst) {
      rep.worst = worst_here;
      rep.worst_t = t;
      rep.worst_control = *arg;
    }
  }
  rep.passed = rep.worst <= tol;
  return rep;
}

PrincipleReport check_MP(const ReducedProblem& red, const Process& proc, const CostateSeq& costates,
                         double tol, std::size_t samples) {
  require_matching(red, proc, costates);
  const ControlSet& set = red.control_set;
  if (!set.compact()) {
    throw PreconditionError(
        "strong maximum principle requires a nonempty compact control set (C1)");
  }
  const std::vector<Vec> us = set.sample(samples);
  const bool refine = set.kind() == ControlSetKind::Box;
  Vec spacing;
  if (refine) {
    const double per_axis =
        std::max(2.0, std::floor(std::pow(static_cast<double>(std::max<std::size_t>(samples, 2)),
                                          1.0 / static_cast<double>(red.d)) + 1e-9));
    spacing = (set.upper() - set.lower()) / (per_axis - 1.0);
  }

  PrincipleReport rep;
  rep.name = "MP";
  rep.tolerance = tol;
  rep.note =
      "adjoint equation taken in the discounted form p_t = D1f^T p_{t+1} + beta^t D1phi; "
      "the undiscounted variant without p_t is treated as a misprint";
  const int T = proc.horizon();
  rep.per_t.assign(static_cast<std::size_t>(T), 0.0);
  std::vector<double> values(us.size());
  for (int t = 0; t < T; ++t) {
    const Vec& x = proc.state(t);
    const Vec& p_next = costates.at(t + 1);
    const double at_hat = hamiltonian(red, t, x, proc.control(t), p_next);
    double best = -std::numeric_limits<double>::infinity();
    Vec best_u;
    for (std::size_t k = 0; k < us.size(); ++k) {
      values[k] = hamiltonian(red, t, x, us[k], p_next);
      if (values[k] > best) {
        best = values[k];
        best_u = us[k];
      }
    }
    rep.samples_used += us.size();
    if (refine) {
      Vec step = spacing / 2.0;
      for (int round = 0; round < 3; ++round) {
        Vec centre = best_u;
        for (Eigen::Index i = 0; i < centre.size(); ++i) {
          for (const double sign : {1.0, -1.0}) {
            Vec trial = centre;
            trial[i] += sign * step[i];
            trial = set.project(trial);
            const double h = hamiltonian(red, t, x, trial, p_next);
            ++rep.samples_used;
            if (h > best) {
              best = h;
              best_u = trial;
            }
          }
        }
        step /= 2.0;
      }
    }
    const double gap = std::max(best, at_hat) - at_hat;
    rep.per_t[static_cast<std::size_t>(t)] = gap;
    if (t == 0 || gap > rep.worst) {
      rep.worst = gap;
      rep.worst_t = t;
      rep.worst_control = best_u;
      rep.maximizers.clear();
      const double top = std::max(best, at_hat);
      for (std::size_t k = 0; k < us.size() && rep.maximizers.size() < 16; ++k) {
        if (values[k] >= top - tol) {
          rep.maximizers.push_back(us[k]);
        }
      }
      if (best_u.size() > 0 && best >= top - tol &&
          std::none_of(rep.maximizers.begin(), rep.maximizers.end(),
                       [&](const Vec& m) { return m == best_u; }) &&
          rep.maximizers.size() < 16) {
        rep.maximizers.push_back(best_u);
      }
    }
  }
  rep.passed = rep.worst <= tol;
  return rep;
}

}  // namespace ihoc
