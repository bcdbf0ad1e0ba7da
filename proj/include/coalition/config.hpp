#pragma once

// Experiment configuration: a flat key = value file, optionally grouped in
// [sections]. Every key belongs to one section and may be written either
// inside it or before the first section header. '#' starts a comment.
//
//   experiment = sweep-alpha
//   values = 1, 2, 4, 8
//   [game]
//   Z = 100
//   g_m = 5/Z
//
// Numeric game parameters accept "a/Z" to mean a divided by the population
// size. Unknown keys, keys in the wrong section and repeated keys are errors.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coalition/game.hpp"
#include "coalition/stochastic.hpp"

namespace coalition {

using ConfigPairs = std::map<std::string, std::string>;

struct ExperimentConfig {
  GameParams params;
  std::string experiment;
  std::vector<double> values;  // alpha values for sweeps and recipes
  std::filesystem::path out_dir;
  std::uint64_t seed = 1;
  std::set<std::string> formats;

  ChainOptions chain;
  SolverOptions solver;
  int grid_resolution = 40;
  std::uint64_t steps = 0;
  std::vector<int> s1_Z;
  int s1_group_size = 0;

  // Every key with the text it resolved from, defaults included. Feeding this
  // back through config_from_pairs rebuilds the same config.
  ConfigPairs settings;

  bool wants(const std::string& format) const { return formats.contains(format); }
};

const std::vector<std::string>& known_experiments();

// Section of a known key, or nullptr.
const char* config_section(const std::string& key);

// Reads key = value pairs. Throws ConfigError naming the offending key or line.
ConfigPairs read_config_pairs(std::istream& in);

// Applies pairs over the defaults and validates everything. Relative paths
// (benefit_file) resolve against base_dir. Throws ConfigError.
ExperimentConfig config_from_pairs(const ConfigPairs& pairs, const std::filesystem::path& base_dir = {});

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace coalition
