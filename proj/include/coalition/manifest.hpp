#pragma once

// Run manifests: the resolved config, code version, timestamps and a SHA-256
// per output file, written as manifest.json next to the outputs. A manifest
// can be fed back to `run` in place of a config file.

#include <filesystem>
#include <string>

#include "coalition/config.hpp"
#include "coalition/experiments.hpp"
#include "json.hpp"

namespace coalition {

std::string sha256_hex(const std::filesystem::path& file);

struct RunOutcome {
  RunReport report;
  nlohmann::ordered_json manifest;
  std::filesystem::path manifest_path;
};

// Runs the experiment and writes manifest.json into config.out_dir.
RunOutcome run(const ExperimentConfig& config);

// Config pairs from either a config file or a manifest (*.json).
ConfigPairs load_run_input(const std::filesystem::path& path);

}  // namespace coalition
