#include "scl/report.hpp"

#include <sstream>
#include <stdexcept>

#include "scl/version.hpp"

namespace scl {

CheckRow make_check(std::string name, double value, double stderr_value, double oracle,
                    double tol) {
  CheckRow row;
  row.name = std::move(name);
  row.value = value;
  row.stderr_value = stderr_value;
  row.oracle = oracle;
  row.tol = tol;
  row.pass = std::abs(value - oracle) <= tol;
  return row;
}

bool ExperimentReport::all_pass() const {
  for (const auto& row : checks) {
    if (!row.pass) return false;
  }
  return true;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  ExperimentConfig c;
  if (!j.contains("experiment") || !j.at("experiment").is_string()) {
    throw std::invalid_argument("config: missing experiment name");
  }
  c.experiment = j.at("experiment").get<std::string>();
  // absent keys fall back to per-experiment defaults; present keys must be
  // valid as given
  if (j.contains("n")) {
    c.n = j.at("n").get<int>();
    if (c.n < 1) throw std::invalid_argument("config: n must be >= 1");
  }
  if (j.contains("horizon")) {
    c.horizon = j.at("horizon").get<double>();
    if (!(c.horizon > 0)) throw std::invalid_argument("config: horizon must be > 0");
  }
  if (j.contains("steps")) {
    c.steps = j.at("steps").get<long>();
    if (c.steps < 1) throw std::invalid_argument("config: steps must be >= 1");
  }
  if (j.contains("paths")) {
    c.paths = j.at("paths").get<long>();
    if (c.paths < 1) throw std::invalid_argument("config: paths must be >= 1");
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("tolerance_multiplier")) {
    c.tolerance_multiplier = j.at("tolerance_multiplier").get<double>();
    if (!(c.tolerance_multiplier > 0)) {
      throw std::invalid_argument("config: tolerance_multiplier must be > 0");
    }
  }
  if (j.contains("workers")) {
    c.workers = j.at("workers").get<int>();
    if (c.workers < 0) throw std::invalid_argument("config: workers must be >= 0");
  }
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw std::invalid_argument("config: params must be a map");
    c.params = j.at("params");
  } else {
    c.params = json::object();
  }
  return c;
}

json config_to_json(const ExperimentConfig& config) {
  json j = json::object();
  j["experiment"] = config.experiment;
  j["n"] = config.n;
  j["horizon"] = config.horizon;
  j["steps"] = config.steps;
  j["paths"] = config.paths;
  j["seed"] = config.seed;
  j["params"] = config.params.is_null() ? json::object() : config.params;
  j["tolerance_multiplier"] = config.tolerance_multiplier;
  j["workers"] = config.workers;
  return j;
}

json report_to_json(const ExperimentReport& report) {
  json j = json::object();
  j["config"] = config_to_json(report.config);
  j["version"] = report.version.empty() ? kVersion : report.version;
  json rows = json::array();
  for (const auto& row : report.checks) {
    json r = json::object();
    r["name"] = row.name;
    r["value"] = row.value;
    r["stderr"] = row.stderr_value;
    r["oracle"] = row.oracle;
    r["tol"] = row.tol;
    r["pass"] = row.pass;
    rows.push_back(std::move(r));
  }
  j["checks"] = std::move(rows);
  j["wallclock_seconds"] = report.wallclock_seconds;
  return j;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "name,value,stderr,oracle,tol,pass\n";
  for (const auto& row : report.checks) {
    out << row.name << ',' << row.value << ',' << row.stderr_value << ',' << row.oracle << ','
        << row.tol << ',' << (row.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

bool reports_equivalent(json a, json b) {
  a.erase("wallclock_seconds");
  b.erase("wallclock_seconds");
  return a.dump() == b.dump();
}

}  // namespace scl
