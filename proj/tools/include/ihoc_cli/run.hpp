#pragma once

#include "ihoc_cli/config.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>

namespace ihoc::cli {

using Json = nlohmann::ordered_json;

constexpr const char* kToolVersion = "0.1.0";

enum ExitStatus : int { kPass = 0, kUsage = 1, kFail = 2, kInconclusive = 3 };

struct RunResult {
  int status = kPass;
  Json report;
  /// One-paragraph human-readable summary.
  std::string summary;
  /// CSV sidecars by file name.
  std::map<std::string, std::string> sidecars;
};

/// Runs the configured pipeline without touching the filesystem.
RunResult execute(const RunConfig& config);

/// execute() plus report.json, summary.txt and CSV sidecars under out_dir.
RunResult run(const RunConfig& config);

}  // namespace ihoc::cli
