#pragma once

#include "ihoc/control_set.hpp"
#include "ihoc/linalg.hpp"

#include <functional>

namespace ihoc {

/// Payoff-type map R^n × U → R.
using ScalarMap = std::function<double(const Vec& x, const Vec& u)>;
/// Dynamics-type map R^n × U → R^n.
using VectorMap = std::function<Vec(const Vec& x, const Vec& u)>;

/// Partial derivatives of a scalar map, stored as column vectors (the row
/// covectors D₁ and D₂ transposed).
struct ScalarPartials {
  Vec dx;
  Vec du;
};

/// Partial Jacobians D₁ (n×n) and D₂ (n×d) of a vector map.
struct VectorPartials {
  Mat dx;
  Mat du;
};

using ScalarPartialsMap = std::function<ScalarPartials(const Vec& x, const Vec& u)>;
using VectorPartialsMap = std::function<VectorPartials(const Vec& x, const Vec& u)>;

/// The original problem: maximize Σ βᵗ ψ(y_t,u_t) subject to y_{t+1} = g(y_t,u_t),
/// y_0 = η, y_t → y∞ and bounded controls in U.
struct ProblemSpec {
  int n = 0;
  int d = 0;
  double beta = 0.0;
  Vec eta;
  Vec y_inf;
  ScalarMap psi;
  VectorMap g;
  ScalarPartialsMap psi_jac;  // optional
  VectorPartialsMap g_jac;    // optional
  ControlSet control_set;

  /// Throws DimensionError / PreconditionError when an invariant is broken.
  void validate() const;
};

/// The zero-target problem: maximize Σ βᵗ φ(x_t,u_t) subject to
/// x_{t+1} = f(x_t,u_t), x_0 = σ, x_t → 0.
///
/// Besides the raw handles, the member functions evaluate with dimension and
/// finiteness checks and fall back to central finite differences when no
/// analytic partials were supplied.
struct ReducedProblem {
  int n = 0;
  int d = 0;
  double beta = 0.0;
  Vec sigma;
  Vec origin_shift;
  ScalarMap phi;
  VectorMap f;
  ScalarPartialsMap phi_jac;  // optional
  VectorPartialsMap f_jac;    // optional
  ControlSet control_set;

  void validate() const;

  [[nodiscard]] double payoff(const Vec& x, const Vec& u) const;
  [[nodiscard]] Vec dynamics(const Vec& x, const Vec& u) const;
  [[nodiscard]] ScalarPartials payoff_partials(const Vec& x, const Vec& u) const;
  [[nodiscard]] VectorPartials dynamics_partials(const Vec& x, const Vec& u) const;
  [[nodiscard]] bool has_analytic_partials() const { return phi_jac && f_jac; }

  /// Finite-difference partials regardless of analytic handles.
  [[nodiscard]] ScalarPartials fd_payoff_partials(const Vec& x, const Vec& u, double step = 0.0) const;
  [[nodiscard]] VectorPartials fd_dynamics_partials(const Vec& x, const Vec& u, double step = 0.0) const;
};

/// Views the original problem in its own coordinates (no shift): σ = η,
/// φ = ψ, f = g. Used to evaluate residuals and payoffs of processes that are
/// expressed in original coordinates.
ReducedProblem original_view(const ProblemSpec& spec);

}  // namespace ihoc
