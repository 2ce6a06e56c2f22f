#pragma once

#include "ihoc/control_set.hpp"
#include "ihoc/fd_jacobian.hpp"
#include "ihoc/problem.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ihoc {

/// Sampled checks never prove limits or suprema; a passing sampled limit is
/// reported as WindowCertified rather than Pass.
enum class HypothesisStatus { Pass, Fail, WindowCertified };

std::string_view to_string(HypothesisStatus status);

struct HypothesisReport {
  std::string name;
  HypothesisStatus status = HypothesisStatus::Fail;
  double worst_value = 0.0;
  std::optional<double> worst_radius;
  std::optional<Vec> worst_state;
  std::optional<Vec> worst_control;
  std::size_t samples_used = 0;
  double tolerance = 0.0;
  /// (radius, sampled sup) pairs for the limit checks.
  std::vector<std::pair<double, double>> profile;
  std::string note;

  [[nodiscard]] bool passed() const { return status != HypothesisStatus::Fail; }
};

struct VanishingSupOptions {
  /// Strictly decreasing, all >= 1e-8.
  std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  /// Directions x/‖x‖ per radius: the ±axes first, then Halton directions.
  std::size_t samples_per_radius = 16;
  std::size_t control_samples = 64;
  double tolerance = 1e-4;
  /// Allowed relative increase of s(r) from one radius to the next.
  double slack = 0.1;
};

/// Estimates s(r) = sup_{‖x‖ = r, u ∈ U} ‖F(x,u)‖ on each radius and passes
/// when s is nonincreasing (up to `slack` relative plus `tolerance` absolute)
/// and s at the smallest radius is <= tolerance.
HypothesisReport check_vanishing_sup(const VectorMap& F, int n, const ControlSet& set,
                                     const VanishingSupOptions& opts = {},
                                     std::string name = "vanishing-sup");

/// f(0, u⁰) = 0 with U star-shaped about u⁰. Convex kinds are star-shaped
/// about any member; finite grids need `grid_star_attested`.
HypothesisReport check_fixed_point(const ReducedProblem& red, double tolerance = 1e-8,
                                   bool grid_star_attested = false);

enum class DerivativeVariant {
  FullJacobian,   ///< ‖Df(x,u)‖ = ‖[D₁f D₂f]‖, the A4 form
  StateJacobian,  ///< ‖D₁f(x,u)‖, the C6 form
};

HypothesisReport check_derivative_vanishing(const ReducedProblem& red, DerivativeVariant variant,
                                            const VanishingSupOptions& opts = {});

struct ConvexlikeOptions {
  /// States are sampled in the box ‖x − center‖∞ <= region_radius.
  double region_radius = 1.0;
  std::optional<Vec> region_center;
  std::size_t state_samples = 8;
  std::size_t pair_samples = 16;
  std::vector<double> thetas{0.25, 0.5, 0.75};
  std::size_t search_samples = 256;
  int refine_rounds = 60;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
};

/// Looks for u ∈ U with ‖f(x,u) − mix_f‖ <= tol and φ(x,u) >= mix_φ − tol where
/// mix_• = (1−θ)•(x,u1) + θ•(x,u2). `best_violation` receives the smallest
/// max(‖f − mix_f‖, mix_φ − φ) found.
std::optional<Vec> find_convexlike_witness(const ReducedProblem& red, const Vec& x, const Vec& u1,
                                           const Vec& u2, double theta,
                                           const ConvexlikeOptions& opts = {},
                                           double* best_violation = nullptr);

/// Sampled version of the convex-likeness hypothesis (C7). Box or finite-grid
/// control sets only. Passing reports are always WindowCertified.
HypothesisReport check_convexlike(const ReducedProblem& red, const ConvexlikeOptions& opts = {});

using MatFunction = std::function<Mat(const Vec&)>;

/// Compares `analytic` with central differences of `map` at every sample
/// point; the error is ‖A − FD‖_max / ‖FD‖_max (absolute if FD vanishes).
HypothesisReport validate_jacobian(const MatFunction& analytic, const VecFunction& map,
                                   const std::vector<Vec>& points, double tolerance = 1e-5,
                                   double step = 0.0);

}  // namespace ihoc
