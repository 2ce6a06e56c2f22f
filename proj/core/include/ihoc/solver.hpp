#pragma once

#include "ihoc/control_set.hpp"
#include "ihoc/problem.hpp"
#include "ihoc/process.hpp"

#include <optional>
#include <vector>

namespace ihoc {

enum class StepRule { Fixed, Backtracking };

struct SolveOptions {
  int T = 50;
  int max_iters = 5000;
  StepRule rule = StepRule::Backtracking;
  double step_size = 1.0;
  double shrink = 0.5;
  double growth = 1.1;
  /// Stop once ‖P_U(u + g) − u‖ falls to this value.
  double stop_tol = 1e-8;
  /// Weight c of the −c‖x_T‖² term; unset picks default_terminal_penalty.
  std::optional<double> terminal_penalty;

  void validate() const;
};

struct TraceEntry {
  int iteration = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct SolveResult {
  Process process;
  std::vector<TraceEntry> trace;
  int iterations = 0;
  bool converged = false;
  double terminal_penalty = 0.0;
  /// Truncated objective including the terminal penalty term.
  double objective = 0.0;
  double projected_gradient_norm = 0.0;
};

/// 0 when ‖D₁f(0,u)‖ < 1 at every sampled control, 1 otherwise.
double default_terminal_penalty(const ReducedProblem& red);

/// Projected gradient ascent on u_0..u_{T-1}. `initial_controls` empty means
/// the star center (or the projection of 0) at every stage.
SolveResult solve_truncated(const ReducedProblem& red, const SolveOptions& opts,
                            std::vector<Vec> initial_controls = {});

/// Scalar fixture x_{t+1} = a x + b u, φ(x,u) = −(q x² + r u²).
struct LQParams {
  double a = 0.9;
  double b = 1.0;
  double q = 1.0;
  double r = 1.0;
  double beta = 0.95;
  double sigma = 1.0;

  void validate() const;
};

struct RiccatiSolution {
  double P = 0.0;
  double K = 0.0;
  int iterations = 0;
  /// a − bK
  double closed_loop = 0.0;
};

/// Discounted scalar Riccati fixed point by iteration from P₀ = q.
RiccatiSolution lq_riccati(const LQParams& params);

ReducedProblem make_lq_problem(const LQParams& params, ControlSet control_set);

/// Rollout of u_t = −K x_t for t < T.
Process lq_closed_loop(const LQParams& params, int T);

struct SearchResult {
  Process best;
  double objective = 0.0;
  std::size_t evaluated = 0;
};

/// Best truncated objective over all control sequences drawn from `grid`.
/// Ties go to the lexicographically smallest sequence. Caps: T <= 6 and
/// |grid| <= 7^d.
SearchResult exhaustive_search(const ReducedProblem& red, int T, std::vector<Vec> grid);

}  // namespace ihoc
