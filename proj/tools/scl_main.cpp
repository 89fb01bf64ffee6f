#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scl/experiments.hpp"
#include "scl/report.hpp"

namespace {

int run_command(const std::string& config_path, std::uint64_t seed, bool seed_set, long paths,
                long steps, const std::string& out_dir) {
  scl::json config_json;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config file " << config_path << "\n";
      return 2;
    }
    try {
      in >> config_json;
    } catch (const std::exception& e) {
      std::cerr << "error: invalid config JSON: " << e.what() << "\n";
      return 2;
    }
  }
  scl::ExperimentReport report;
  try {
    scl::ExperimentConfig config = scl::config_from_json(config_json);
    if (seed_set) config.seed = seed;
    if (paths > 0) config.paths = paths;
    if (steps > 0) config.steps = steps;
    report = scl::run_experiment(config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: experiment failed: " << e.what() << "\n";
    return 2;
  }

  const scl::json j = scl::report_to_json(report);
  if (out_dir.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::filesystem::create_directories(out_dir);
    const auto json_path = std::filesystem::path(out_dir) / "report.json";
    const auto csv_path = std::filesystem::path(out_dir) / "report.csv";
    std::ofstream(json_path) << j.dump(2) << "\n";
    std::ofstream(csv_path) << scl::report_to_csv(report);
    std::cout << "wrote " << json_path.string() << " and " << csv_path.string() << "\n";
  }
  int failed = 0;
  for (const auto& row : report.checks) {
    if (!row.pass) ++failed;
  }
  if (failed > 0) {
    std::cerr << failed << " of " << report.checks.size() << " checks failed\n";
    return 1;
  }
  return 0;
}

int list_command() {
  for (const auto& info : scl::list_experiments()) {
    std::printf("%-18s %s\n", info.name.c_str(), info.summary.c_str());
    std::printf("%-18s   modules: %s; verifies: %s\n", "", info.modules.c_str(),
                info.anchor.c_str());
  }
  return 0;
}

int report_command(const std::string& in_path, const std::string& format) {
  std::ifstream in(in_path);
  if (!in) {
    std::cerr << "error: cannot open report " << in_path << "\n";
    return 2;
  }
  scl::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    std::cerr << "error: invalid report JSON: " << e.what() << "\n";
    return 2;
  }
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  // csv of the checks table
  if (!j.contains("checks") || !j.at("checks").is_array()) {
    std::cerr << "error: report has no checks array\n";
    return 2;
  }
  std::cout << "name,value,stderr,oracle,tol,pass\n";
  std::cout.precision(17);
  for (const auto& row : j.at("checks")) {
    std::cout << row.value("name", "") << ',' << row.value("value", 0.0) << ','
              << row.value("stderr", 0.0) << ',' << row.value("oracle", 0.0) << ','
              << row.value("tol", 0.0) << ',' << (row.value("pass", false) ? "true" : "false")
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seeded experiments for drift-controlled diffusions on R^n and S^n"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a configured experiment and write its report");
  std::string config_path;
  std::uint64_t seed = 0;
  long paths = 0, steps = 0;
  std::string out_dir;
  run->add_option("--config", config_path, "JSON config file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the seed");
  run->add_option("--paths", paths, "override the path count")->check(CLI::PositiveNumber);
  run->add_option("--steps", steps, "override the step count")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "directory for report.json and report.csv");

  auto* list = app.add_subcommand("list", "list available experiments");

  auto* rep = app.add_subcommand("report", "re-render a stored report");
  std::string in_path, format = "csv";
  rep->add_option("--in", in_path, "report JSON file")->required();
  rep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    return run_command(config_path, seed, seed_opt->count() > 0, paths, steps, out_dir);
  }
  if (list->parsed()) return list_command();
  if (rep->parsed()) return report_command(in_path, format);
  return 2;
}
