#ifndef SCL_REPORT_HPP
#define SCL_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace scl {

using json = nlohmann::ordered_json;

struct CheckRow {
  std::string name;
  double value = 0.0;
  double stderr_value = 0.0;  // 0 for deterministic checks
  double oracle = 0.0;
  double tol = 0.0;
  bool pass = false;
};

CheckRow make_check(std::string name, double value, double stderr_value, double oracle,
                    double tol);
// pass iff |value - oracle| <= tol is not always the right shape; this one
// is, the others set `pass` directly.

struct ExperimentConfig {
  std::string experiment;
  int n = 0;           // 0: experiment default
  double horizon = 0;  // 0: experiment default
  long steps = 0;
  long paths = 0;
  std::uint64_t seed = 1;
  double tolerance_multiplier = 3.0;
  int workers = 0;  // 0: hardware concurrency
  json params;      // experiment-specific map
};

struct ExperimentReport {
  ExperimentConfig config;  // resolved values, echoed into the report
  std::string version;
  std::vector<CheckRow> checks;
  double wallclock_seconds = 0.0;

  bool all_pass() const;
};

ExperimentConfig config_from_json(const json& j);
json config_to_json(const ExperimentConfig& config);
json report_to_json(const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);

// Byte comparison of serialized reports with the wallclock stamp removed.
bool reports_equivalent(json a, json b);

}  // namespace scl

#endif  // SCL_REPORT_HPP
