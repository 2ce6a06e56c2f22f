#include "ihoc_cli/config.hpp"
#include "ihoc_cli/families.hpp"
#include "ihoc_cli/run.hpp"

#include <ihoc/errors.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace ihoc::cli;

  CLI::App app{"Discounted infinite-horizon optimal control: solve, check and certify candidates"};
  app.set_version_flag("--version", std::string(kToolVersion));
  std::string config_path;
  std::string command;
  std::uint64_t seed = 0;
  std::string out_dir;
  double tol_scale = 0.0;
  bool quiet = false;
  app.add_option("--config", config_path, "YAML run configuration")->required();
  app.add_option("--command", command, "Pipeline to run; overrides the config")
      ->check(CLI::IsMember({"reduce", "solve", "costates", "check-weak", "check-strong", "certify",
                             "hypotheses", "oracle-compare"}));
  CLI::Option* seed_opt = app.add_option("--seed", seed, "Sampling seed; overrides the config");
  app.add_option("--out", out_dir, "Output directory for report.json and CSV files");
  CLI::Option* scale_opt =
      app.add_option("--tol-scale", tol_scale, "Multiply every tolerance by this factor")
          ->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", quiet, "Do not print the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (!command.empty()) {
      cfg.command = parse_command(command);
    }
    if (*seed_opt) {
      cfg.seed = seed;
    }
    if (!out_dir.empty()) {
      cfg.out_dir = out_dir;
    }
    if (*scale_opt) {
      cfg.tol_scale = tol_scale;
    }
    const RunResult result = run(cfg);
    if (!quiet) {
      std::cout << result.summary;
    }
    return result.status;
  } catch (const UsageError& e) {
    std::cerr << "ihoc: " << e.what() << "\n";
  } catch (const ihoc::Error& e) {
    std::cerr << "ihoc: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "ihoc: unexpected error: " << e.what() << "\n";
  }
  return kUsage;
}
