#pragma once

#include "ihoc_cli/config.hpp"

#include <ihoc/problem.hpp>
#include <ihoc/solver.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ihoc::cli {

using FamilyFactory = std::function<ProblemSpec(const YAML::Node& params)>;

/// Makes `factory` available under `name` in configs. Replaces an existing
/// entry with the same name.
void register_family(const std::string& name, FamilyFactory factory);
std::vector<std::string> registered_families();

/// Throws UsageError for unknown families or incomplete parameters.
ProblemSpec make_problem(const std::string& family, const YAML::Node& params);

/// LQ parameters of the reduced lq-scalar instance (σ = η − y∞).
std::optional<LQParams> scalar_lq_params(const std::string& family, const YAML::Node& params);

double require_double(const YAML::Node& params, const std::string& key);
Vec read_vector(const YAML::Node& node, const std::string& what);
Mat read_matrix(const YAML::Node& node, const std::string& what);
/// `control: {lower, upper, star}` for boxes or `{points, star}` for grids.
/// A box without `star` gets the point of the box closest to the origin.
ControlSet read_control_set(const YAML::Node& node, int d);

}  // namespace ihoc::cli
