#pragma once

#include "ihoc/adjoint.hpp"
#include "ihoc/hypotheses.hpp"
#include "ihoc/problem.hpp"
#include "ihoc/process.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ihoc {

enum class ConditionId { Feasibility, Smoothness, Boundedness, Adjoint, WeakMax, Concavity };
enum class Verdict { Certified, Refuted, Inconclusive };

std::string_view to_string(ConditionId id);
std::string_view to_string(Verdict verdict);

struct ConditionResult {
  ConditionId id = ConditionId::Feasibility;
  /// Roman-numeral label, e.g. "(iv) adjoint".
  std::string label;
  HypothesisStatus status = HypothesisStatus::Fail;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  std::optional<int> time_index;
  std::string note;

  [[nodiscard]] bool passed() const { return status != HypothesisStatus::Fail; }
};

struct CertifyConfig {
  double tol_feasibility = 1e-10;
  double tol_smoothness = 1e-5;
  double tol_adjoint = 1e-10;
  double tol_weak = 1e-6;
  double tol_concavity = 1e-8;
  std::size_t smoothness_points = 8;
  std::size_t boundedness_samples = 64;
  std::size_t weak_samples = 101;
  std::size_t concavity_pairs = 32;
  /// Concavity region ‖x‖∞ <= region_factor · max_t ‖x̂_t‖.
  double region_factor = 2.0;
  std::uint64_t seed = 0;
  bool parallel = true;

  /// Every tolerance multiplied by `factor`.
  [[nodiscard]] CertifyConfig scaled(double factor) const;
};

struct CertificateReport {
  std::vector<ConditionResult> conditions;
  Verdict verdict = Verdict::Inconclusive;
  CertifyConfig config;
  std::vector<std::string> notes;

  [[nodiscard]] const ConditionResult& condition(ConditionId id) const;
};

/// certified iff every condition passes; refuted iff some condition fails with
/// a residual above ten times its tolerance; inconclusive otherwise.
Verdict decide(const std::vector<ConditionResult>& conditions);

/// Checks the sufficiency conditions for the zero-target problem on a
/// candidate process and its costates. Needs a convex (box or polytope)
/// control set.
CertificateReport certify(const ReducedProblem& red, const Process& proc, const CostateSeq& costates,
                          const CertifyConfig& config = {});

/// Same checks for a process in original coordinates; labels follow the
/// original problem's numbering, which skips (iv).
CertificateReport certify_original(const ProblemSpec& spec, const Process& proc,
                                   const CostateSeq& costates, const CertifyConfig& config = {});

struct TelescopingReport {
  bool passed = false;
  double min_margin = 0.0;
  int argmin_prefix = 1;
  /// margins[k-1] for prefix length k = 1..horizon.
  std::vector<double> margins;
  double tolerance = 0.0;
  int horizon = 0;
};

/// For k = 1..T: Σ_{t<=k} βᵗ(φ(x̂_t,û_t) − φ(x_t,u_t)) + ⟨p_{k+1}, x̂_{k+1} − x_{k+1}⟩ >= −tol.
/// Horizons are truncated to the common prefix.
TelescopingReport check_telescoping(const ReducedProblem& red, const Process& candidate,
                                    const Process& competitor, const CostateSeq& costates, int T,
                                    double tol = 1e-8);

}  // namespace ihoc
