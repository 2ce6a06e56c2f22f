#pragma once

#include <ihoc/problem.hpp>
#include <ihoc/solver.hpp>

#include "generators.hpp"

namespace ihoc::testing {

/// a=0.9, b=1, q=r=1, β=0.95, σ=1.
LQParams reference_lq();

/// Scalar LQ with control box [-half_width, half_width].
ReducedProblem lq_problem(const LQParams& p = reference_lq(), double half_width = 5.0);

/// ProblemSpec in shifted form: g(y,u) = y∞ + A(y − y∞) + Bu,
/// ψ(y,u) = −(y−y∞)ᵀQ(y−y∞) − uᵀRu, control box [-w,w]^d.
ProblemSpec shifted_lq_spec(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, double beta,
                            const Vec& eta, const Vec& y_inf, double half_width = 5.0);

/// Smooth nonlinear problem with analytic partials:
///   f(x,u) = Ax + Bu + 0.1·sin(Cx + Du)
///   φ(x,u) = −xᵀQx − uᵀRu + 0.1·cos(wᵀx + vᵀu)
/// ‖A‖ = 0.6, controls in [-1,1]^d.
ReducedProblem random_smooth_problem(Gen& gen, int n, int d, double beta = 0.9);

/// Same maps without analytic partials.
ReducedProblem strip_partials(ReducedProblem red);

}  // namespace ihoc::testing
