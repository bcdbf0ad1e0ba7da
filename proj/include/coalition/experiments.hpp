#pragma once

// Experiment drivers. Each writes its data files into config.out_dir and
// returns what it wrote together with a JSON summary. Files depend only on
// the config, so repeated runs give identical bytes.
//
//   field         flow.csv, fixed_points.csv             (+ field.svg)
//   stationary    stationary.csv, gradient.csv           (+ stationary.svg)
//   sweep-alpha   per-alpha stationary/gradient CSVs, sweep.csv
//   figure2       sweep-alpha with the figure parameters forced, plus fixed points
//   informed-map  informed.csv, classes.csv
//   k-profile     k_profile.csv
//   s1-compare    s1.csv
//   montecarlo    occupancy.csv
// Every experiment also writes summary.json when json output is enabled.

#include <filesystem>
#include <string>
#include <vector>

#include "coalition/config.hpp"
#include "json.hpp"

namespace coalition {

struct RunReport {
  std::vector<std::filesystem::path> files;  // relative to out_dir, in write order
  nlohmann::ordered_json summary;
  std::vector<std::string> decisions;  // modelling choices the run relied on
};

RunReport run_experiment(const ExperimentConfig& config);

// Label used in per-alpha file names ("1", "1.5", ...).
std::string alpha_label(double alpha);

// Membership level whose group size is closest to group_size (ties to the
// smaller level), among levels that leave at least one outsider.
int matched_membership(const GameParams& params, int group_size);

}  // namespace coalition
