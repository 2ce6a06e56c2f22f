#pragma once

#include "ihoc/problem.hpp"
#include "ihoc/process.hpp"

namespace ihoc {

/// Shifts the problem so that the asymptotic target becomes the origin:
/// φ(x,u) = ψ(x + y∞, u), f(x,u) = g(x + y∞, u) − y∞, σ = η − y∞.
///
/// The returned handles are thin wrappers capturing copies of the original
/// handles and the shift; analytic partials carry over unchanged (the shift
/// has unit derivative).
ReducedProblem reduce(const ProblemSpec& spec);

/// x_t = y_t − y∞; controls unchanged; tail becomes states-to-zero.
Process to_reduced(const Process& original, const ProblemSpec& spec);

/// y_t = x_t + y∞; controls unchanged; tail becomes states-to-target.
Process lift_process(const Process& reduced, const ProblemSpec& spec);

}  // namespace ihoc
