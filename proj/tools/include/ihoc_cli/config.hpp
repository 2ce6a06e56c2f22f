#pragma once

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ihoc::cli {

/// Malformed configuration or command line; maps to exit status 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Reduce, Solve, Costates, CheckWeak, CheckStrong, Certify, Hypotheses, OracleCompare };

Command parse_command(const std::string& name);
std::string to_string(Command command);

struct Tolerances {
  double feasibility = 1e-10;
  double smoothness = 1e-5;
  double adjoint = 1e-10;
  double weak = 1e-6;
  double strong = 1e-6;
  double concavity = 1e-8;
  double hypotheses = 1e-4;
  double oracle = 1e-6;
};

struct Sampling {
  int control_samples = 101;
  int concavity_pairs = 32;
  double region_factor = 2.0;
  int samples_per_radius = 16;
};

struct SolverConfig {
  int max_iters = 5000;
  std::string rule = "backtracking";
  double step_size = 1.0;
  double stop_tol = 1e-8;
  std::optional<double> terminal_penalty;
};

/// Where the candidate process for check/certify commands comes from.
struct CandidateConfig {
  /// "solve", "riccati" (lq-scalar only) or "file".
  std::string source = "solve";
  /// Process CSV in original coordinates when source = "file".
  std::string path;
};

/// Optional brute-force cross-check for oracle-compare (scalar controls).
struct ExhaustiveConfig {
  int horizon = 3;
  std::vector<double> grid;
};

struct RunConfig {
  std::string family;
  YAML::Node params;
  Command command = Command::Certify;
  int horizon = 60;
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  Tolerances tolerances;
  Sampling sampling;
  SolverConfig solver;
  CandidateConfig candidate;
  std::optional<ExhaustiveConfig> exhaustive;
  std::string out_dir = "out";
  bool write_csv = true;
  /// Directory of the config file; relative paths inside it resolve here.
  std::string base_dir = ".";

  void validate() const;
};

/// Parses a YAML document. Throws UsageError on malformed or incomplete input.
RunConfig parse_config(const YAML::Node& root, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Tolerances multiplied by tol_scale.
Tolerances effective_tolerances(const RunConfig& config);

}  // namespace ihoc::cli
