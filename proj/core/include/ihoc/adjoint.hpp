#pragma once

#include "ihoc/problem.hpp"
#include "ihoc/process.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ihoc {

/// ‖p_t‖ <= constant·rateᵗ for onset <= t <= T+1.
struct TailCertificate {
  double rate = 0.0;
  double constant = 0.0;
  int onset = 1;
  /// sup ‖D₁f(x̂_t,û_t)‖ over the certified suffix.
  double contraction = 0.0;
};

/// Costates p_1..p_{T+1}, stored as column vectors.
struct CostateSeq {
  Sequence p;
  double l1_partial = 0.0;
  std::optional<TailCertificate> tail;
  Vec terminal;
  /// Σ_{t=1}^{T} Π_{s=t}^{T} ‖D₁f(x̂_s,û_s)‖: how far a change of p_{T+1}
  /// propagates (in ℓ¹) into p_1..p_T.
  double terminal_sensitivity = 0.0;

  [[nodiscard]] int horizon() const { return p.last_index() - 1; }
  [[nodiscard]] const Vec& at(int t) const { return p.at(t); }
  /// Bound on the ℓ¹ mass missed by truncating at T with a zero terminal
  /// costate. Infinite when no tail certificate was fitted.
  [[nodiscard]] double l1_tail_bound() const;
};

/// H_t(x,u,p) = βᵗ φ(x,u) + ⟨p, f(x,u)⟩.
double hamiltonian(const ReducedProblem& red, int t, const Vec& x, const Vec& u, const Vec& p_next);

/// Backward recursion p_t = D₁f(x̂_t,û_t)ᵀ p_{t+1} + βᵗ D₁φ(x̂_t,û_t) for
/// t = T..1 from p_{T+1} = p_terminal (zero by default), with û_T := û_{T-1}.
CostateSeq compute_costates(const ReducedProblem& red, const Process& proc,
                            const std::optional<Vec>& p_terminal = std::nullopt);

struct PrincipleReport {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  int worst_t = 0;
  double tolerance = 0.0;
  std::vector<double> per_t;
  std::optional<Vec> worst_control;
  /// check_MP: sampled maximizers within tolerance at the worst time index.
  std::vector<Vec> maximizers;
  std::size_t samples_used = 0;
  std::string note;
};

/// max_{1 <= t <= T} ‖p_t − D₁f(x̂_t,û_t)ᵀ p_{t+1} − βᵗ D₁φ(x̂_t,û_t)‖.
PrincipleReport check_AE(const ReducedProblem& red, const Process& proc, const CostateSeq& costates,
                         double tol = 1e-10);

/// Weak maximum principle: for t = 0..T-1 and sampled u ∈ U,
/// max(0, ⟨βᵗ D₂φ(x̂_t,û_t) + D₂f(x̂_t,û_t)ᵀ p_{t+1}, u − û_t⟩) <= tol.
PrincipleReport check_WM(const ReducedProblem& red, const Process& proc, const CostateSeq& costates,
                         double tol = 1e-6, std::size_t samples = 101);

/// Strong maximum principle: gap_t = max_{u} H_t(x̂_t,u,p_{t+1}) − H_t(x̂_t,û_t,p_{t+1})
/// over an exhaustive grid, or a box lattice plus three halving refinements.
/// Throws PreconditionError for non-compact control sets.
PrincipleReport check_MP(const ReducedProblem& red, const Process& proc, const CostateSeq& costates,
                         double tol = 1e-6, std::size_t samples = 101);

}  // namespace ihoc
