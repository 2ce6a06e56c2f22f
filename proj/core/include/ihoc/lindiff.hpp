#pragma once

#include "ihoc/linalg.hpp"

#include <functional>
#include <optional>
#include <ostream>

namespace ihoc {

/// The Cauchy problem z_{t+1} = A_t·z_t + e_t (t >= 1), z_1 = ζ.
struct LinearSystem {
  int n = 0;
  std::function<Mat(int t)> A;
  std::function<Vec(int t)> e;
  Vec zeta;
  /// Claimed bound ‖A_t‖ <= M for t >= t_star.
  std::optional<double> M;
  std::optional<int> t_star;
  /// User-declared sup_t ‖e_t‖ for analytic forcing terms; when absent the
  /// sup is taken over the solved window and the bound is window-certified.
  std::optional<double> e_sup;

  void validate() const;
};

/// Returns z_1..z_{T+1} (first_index = 1), one multiply-add per step.
Sequence solve_cauchy(const LinearSystem& sys, int T);

/// z_{t+1} = (A_t⋯A_1)ζ + Σ_{i=1}^{t-1}(A_t⋯A_{i+1})e_i + e_t, recomputing the
/// matrix products for every query. Meant as an oracle, not a hot path.
Vec closed_form(const LinearSystem& sys, int t);

struct DecayBound {
  double value = 0.0;
  double e_sup = 0.0;
  /// true when ‖e‖∞ was measured over a finite window rather than declared.
  bool window_certified = false;
};

/// max{‖ζ‖, ‖e‖∞} / (1 − M). `window` is the number of e_t terms inspected
/// when no analytic sup is declared. Throws PreconditionError when M is
/// missing or M >= 1.
DecayBound decay_bound(const LinearSystem& sys, int window = 0);

/// Smallest t_star <= T with max_{t_star <= t <= T} ‖A_t‖ <= 1 − margin.
std::optional<int> find_contraction_start(const LinearSystem& sys, int T, double margin = 1e-6);

/// A_t ↦ A_{t+offset}, e_t ↦ e_{t+offset}, ζ ↦ `new_zeta` (normally z_{offset+1}).
LinearSystem shifted(const LinearSystem& sys, int offset, Vec new_zeta);

struct DecayCheck {
  bool decayed = false;
  double tail_max = 0.0;
  double preceding_max = 0.0;
};

/// True iff max ‖z_t‖ over the last `tail_window` entries is <= tail_tol and
/// does not exceed the max over the window before it.
DecayCheck verify_decay(const Sequence& z, double tail_tol, int tail_window);

/// Smallest T >= 1 with rate^T · bound <= tail_tol.
int horizon_for_tail(double rate, double bound, double tail_tol);

}  // namespace ihoc
