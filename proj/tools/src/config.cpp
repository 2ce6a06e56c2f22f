#include "ihoc_cli/config.hpp"

#include <array>
#include <filesystem>
#include <utility>

namespace ihoc::cli {

namespace {

constexpr std::array<std::pair<Command, const char*>, 8> kCommands{{
    {Command::Reduce, "reduce"},
    {Command::Solve, "solve"},
    {Command::Costates, "costates"},
    {Command::CheckWeak, "check-weak"},
    {Command::CheckStrong, "check-strong"},
    {Command::Certify, "certify"},
    {Command::Hypotheses, "hypotheses"},
    {Command::OracleCompare, "oracle-compare"},
}};

template <typename T>
void read_optional(const YAML::Node& node, const char* key, T& target) {
  const YAML::Node value = node[key];
  if (!value) {
    return;
  }
  try {
    target = value.as<T>();
  } catch (const YAML::Exception&) {
    throw UsageError(std::string("config field '") + key + "' has the wrong type");
  }
}

void read_tolerances(const YAML::Node& node, Tolerances& tol) {
  if (!node) {
    return;
  }
  if (!node.IsMap()) {
    throw UsageError("config section 'tolerances' must be a map");
  }
  read_optional(node, "feasibility", tol.feasibility);
  read_optional(node, "smoothness", tol.smoothness);
  read_optional(node, "adjoint", tol.adjoint);
  read_optional(node, "weak", tol.weak);
  read_optional(node, "strong", tol.strong);
  read_optional(node, "concavity", tol.concavity);
  read_optional(node, "hypotheses", tol.hypotheses);
  read_optional(node, "oracle", tol.oracle);
}

void read_sampling(const YAML::Node& node, Sampling& s) {
  if (!node) {
    return;
  }
  if (!node.IsMap()) {
    throw UsageError("config section 'sampling' must be a map");
  }
  read_optional(node, "control_samples", s.control_samples);
  read_optional(node, "concavity_pairs", s.concavity_pairs);
  read_optional(node, "region_factor", s.region_factor);
  read_optional(node, "samples_per_radius", s.samples_per_radius);
}

void read_solver(const YAML::Node& node, SolverConfig& s) {
  if (!node) {
    return;
  }
  if (!node.IsMap()) {
    throw UsageError("config section 'solver' must be a map");
  }
  read_optional(node, "max_iters", s.max_iters);
  read_optional(node, "rule", s.rule);
  read_optional(node, "step_size", s.step_size);
  read_optional(node, "stop_tol", s.stop_tol);
  if (node["terminal_penalty"]) {
    double c = 0.0;
    read_optional(node, "terminal_penalty", c);
    s.terminal_penalty = c;
  }
}

void read_candidate(const YAML::Node& node, CandidateConfig& c) {
  if (!node) {
    return;
  }
  if (node.IsScalar()) {
    c.source = node.as<std::string>();
    return;
  }
  if (!node.IsMap()) {
    throw UsageError("config field 'candidate' must be a string or a map");
  }
  read_optional(node, "source", c.source);
  read_optional(node, "path", c.path);
}

bool positive(double v) { return v > 0.0; }

}  // namespace

Command parse_command(const std::string& name) {
  for (const auto& [command, label] : kCommands) {
    if (name == label) {
      return command;
    }
  }
  throw UsageError("unknown command '" + name + "'");
}

std::string to_string(Command command) {
  for (const auto& [c, label] : kCommands) {
    if (c == command) {
      return label;
    }
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (family.empty()) {
    throw UsageError("config is missing 'problem.family'");
  }
  if (horizon < 1) {
    throw UsageError("horizon must be at least 1");
  }
  if (!(tol_scale > 0.0)) {
    throw UsageError("tol-scale must be positive");
  }
  for (const double t : {tolerances.feasibility, tolerances.smoothness, tolerances.adjoint,
                         tolerances.weak, tolerances.strong, tolerances.concavity,
                         tolerances.hypotheses, tolerances.oracle}) {
    if (!positive(t)) {
      throw UsageError("tolerances must be positive");
    }
  }
  if (sampling.control_samples < 2 || sampling.concavity_pairs < 1 ||
      sampling.samples_per_radius < 1 || !positive(sampling.region_factor)) {
    throw UsageError("sampling parameters out of range");
  }
  if (solver.rule != "fixed" && solver.rule != "backtracking") {
    throw UsageError("solver.rule must be 'fixed' or 'backtracking'");
  }
  if (solver.max_iters < 1 || !positive(solver.step_size) || !positive(solver.stop_tol)) {
    throw UsageError("solver parameters out of range");
  }
  if (candidate.source != "solve" && candidate.source != "riccati" && candidate.source != "file") {
    throw UsageError("candidate.source must be 'solve', 'riccati' or 'file'");
  }
  if (exhaustive && exhaustive->grid.empty()) {
    throw UsageError("oracle.exhaustive.grid must list at least one control value");
  }
  if (candidate.source == "file" && candidate.path.empty()) {
    throw UsageError("candidate.path is required when candidate.source is 'file'");
  }
}

RunConfig parse_config(const YAML::Node& root, const std::string& base_dir) {
  if (!root || !root.IsMap()) {
    throw UsageError("config root must be a map");
  }
  RunConfig cfg;
  cfg.base_dir = base_dir;
  const YAML::Node problem = root["problem"];
  if (!problem || !problem.IsMap()) {
    throw UsageError("config is missing the 'problem' section");
  }
  read_optional(problem, "family", cfg.family);
  cfg.params = problem;

  std::string command;
  read_optional(root, "command", command);
  if (!command.empty()) {
    cfg.command = parse_command(command);
  }
  read_optional(root, "horizon", cfg.horizon);
  read_optional(root, "seed", cfg.seed);
  read_optional(root, "tol_scale", cfg.tol_scale);
  read_tolerances(root["tolerances"], cfg.tolerances);
  read_sampling(root["sampling"], cfg.sampling);
  read_solver(root["solver"], cfg.solver);
  read_candidate(root["candidate"], cfg.candidate);
  if (const YAML::Node oracle = root["oracle"]) {
    if (const YAML::Node ex = oracle["exhaustive"]) {
      ExhaustiveConfig e;
      read_optional(ex, "horizon", e.horizon);
      read_optional(ex, "grid", e.grid);
      cfg.exhaustive = e;
    }
  }
  if (const YAML::Node output = root["output"]) {
    if (output.IsScalar()) {
      cfg.out_dir = output.as<std::string>();
    } else if (output.IsMap()) {
      read_optional(output, "dir", cfg.out_dir);
      read_optional(output, "csv", cfg.write_csv);
    } else {
      throw UsageError("config field 'output' must be a string or a map");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw UsageError("cannot open config file '" + path + "'");
  } catch (const YAML::Exception& e) {
    throw UsageError("malformed config '" + path + "': " + e.what());
  }
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  return parse_config(root, parent.empty() ? "." : parent.string());
}

Tolerances effective_tolerances(const RunConfig& config) {
  Tolerances t = config.tolerances;
  const double s = config.tol_scale;
  t.feasibility *= s;
  t.smoothness *= s;
  t.adjoint *= s;
  t.weak *= s;
  t.strong *= s;
  t.concavity *= s;
  t.hypotheses *= s;
  t.oracle *= s;
  return t;
}

}  // namespace ihoc::cli
