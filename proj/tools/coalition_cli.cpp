// coalition run <config-file> [--out DIR] [--seed N] [--format csv,json,svg] [--experiment NAME]
//
// Exit status: 0 ok, 1 other failure, 2 configuration, 3 capacity, 4 solver
// did not converge. Failures print one line to stderr:
//   error: <kind>: <reason>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "coalition/config.hpp"
#include "coalition/errors.hpp"
#include "coalition/manifest.hpp"

namespace {

int fail(const char* kind, const std::string& reason, int status) {
  std::string line = reason;
  for (char& ch : line)
    if (ch == '\n' || ch == '\r') ch = ' ';
  std::cerr << "error: " << kind << ": " << line << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coalition-formation dynamics: replicator fields, Markov chains and recipes"};
  app.set_version_flag("--version", std::string(COALITION_VERSION));
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file or manifest");
  std::string config_path;
  std::optional<std::string> out_dir, format, experiment;
  std::optional<std::uint64_t> seed;
  run_cmd->add_option("config", config_path, "Config file, or a manifest.json from an earlier run")->required();
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--seed", seed, "Random seed");
  run_cmd->add_option("--format", format, "Comma-separated output formats: csv, json, svg");
  run_cmd->add_option("--experiment", experiment, "Experiment name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what(), 2);
  }

  try {
    auto pairs = coalition::load_run_input(config_path);
    if (out_dir) pairs["out"] = *out_dir;
    if (seed) pairs["seed"] = std::to_string(*seed);
    if (format) pairs["formats"] = *format;
    if (experiment) pairs["experiment"] = *experiment;
    const auto cfg = coalition::config_from_pairs(pairs, std::filesystem::path(config_path).parent_path());
    const auto outcome = coalition::run(cfg);
    for (const auto& f : outcome.report.files) std::cout << (cfg.out_dir / f).string() << '\n';
    std::cout << outcome.manifest_path.string() << '\n';
    return 0;
  } catch (const coalition::ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const coalition::CapacityError& e) {
    return fail("capacity", e.what(), 3);
  } catch (const coalition::ConvergenceError& e) {
    return fail("convergence", std::string(e.what()) + " (residual " + std::to_string(e.residual()) + ")", 4);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
}
