#pragma once

#include "ihoc/problem.hpp"
#include "ihoc/process.hpp"

#include <cstddef>
#include <vector>

namespace ihoc {

/// βᵗ, computed the same way everywhere in the library.
double discount(double beta, int t);

struct ObjectiveEstimate {
  double partial_sum = 0.0;
  /// β^{T+1}/(1−β) · sampled sup |φ| over the ball ‖x‖ <= 1.1·max_t‖x_t‖ and the
  /// control hull. Sampled, so only window-certified.
  double tail_bound = 0.0;
};

/// Σ_{t=0}^{T} βᵗ φ(x_t, u_t) with u_T := u_{T-1}; no tail estimate.
double partial_objective(const ReducedProblem& red, const Process& proc);

ObjectiveEstimate eval_J(const ReducedProblem& red, const Process& proc, std::size_t ball_samples = 64);

struct ResidualReport {
  double max_residual = 0.0;
  int argmax_t = 0;
};

/// max_{0 <= t < T} ‖x_{t+1} − f(x_t, u_t)‖.
ResidualReport dynamics_residual(const ReducedProblem& red, const Process& proc);

bool is_feasible(const ReducedProblem& red, const Process& proc);

/// x_0 = σ and x_{t+1} = f(x_t, u_t). Throws PreconditionError for controls outside U.
Process rollout(const ReducedProblem& red, const std::vector<Vec>& controls, double feasible_tol = 1e-10);

/// Gradient of the truncated objective with respect to u_0..u_{T-1} along the
/// rollout constraint, by one backward costate sweep:
///   g_t = βᵗ D₂φ(x_t,u_t) + D₂f(x_t,u_t)ᵀ p_{t+1}.
/// Because u_T is held equal to u_{T-1}, g_{T-1} also picks up βᵀ D₂φ(x_T,u_{T-1}).
/// A positive `terminal_penalty` c differentiates J − c‖x_T‖² instead.
std::vector<Vec> grad_J_controls(const ReducedProblem& red, const Process& proc,
                                 double terminal_penalty = 0.0);

}  // namespace ihoc
