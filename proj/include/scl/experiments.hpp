#ifndef SCL_EXPERIMENTS_HPP
#define SCL_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "scl/report.hpp"

namespace scl {

struct ExperimentInfo {
  std::string name;
  std::string summary;
  std::string modules;
  std::string anchor;  // where the verified statement lives
};

// Stable, sorted catalog.
std::vector<ExperimentInfo> list_experiments();

// Fills in per-experiment defaults for unset config fields (n, horizon,
// steps, paths, params) and echoes the resolved values into the report.
ExperimentConfig resolve_config(const ExperimentConfig& config);

// Runs one named experiment; throws std::invalid_argument on an unknown
// name or bad configuration.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace scl

#endif  // SCL_EXPERIMENTS_HPP
