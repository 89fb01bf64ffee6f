#include <doctest.h>

#include "scl/experiments.hpp"

using namespace scl;

TEST_CASE("catalog is stable, sorted, and complete") {
  const auto infos = list_experiments();
  REQUIRE(infos.size() == 12);
  for (std::size_t i = 1; i < infos.size(); ++i) CHECK(infos[i - 1].name < infos[i].name);
  bool has_bl = false, has_logsob = false;
  for (const auto& info : infos) {
    CHECK_FALSE(info.summary.empty());
    CHECK_FALSE(info.modules.empty());
    CHECK_FALSE(info.anchor.empty());
    if (info.name == "brascamp-lieb") has_bl = true;
    if (info.name == "logsob") has_logsob = true;
  }
  CHECK(has_bl);
  CHECK(has_logsob);
}

TEST_CASE("config parsing and validation") {
  const json good = {{"experiment", "borell-euclidean"}, {"paths", 1000}, {"seed", 9}};
  const ExperimentConfig c = config_from_json(good);
  CHECK(c.experiment == "borell-euclidean");
  CHECK(c.paths == 1000);
  CHECK(c.seed == 9);

  CHECK_THROWS_AS(config_from_json(json{{"paths", 10}}), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(json{{"experiment", "borell-euclidean"}, {"steps", 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(json{{"experiment", "borell-euclidean"}, {"paths", -3}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(json{{"experiment", "x"}, {"params", 7}}),
                  std::invalid_argument);
  ExperimentConfig unknown;
  unknown.experiment = "no-such-thing";
  CHECK_THROWS_AS(resolve_config(unknown), std::invalid_argument);
}

TEST_CASE("defaults resolve and user params override") {
  ExperimentConfig c;
  c.experiment = "borell-euclidean";
  c.params = json{{"amplitude", 0.25}};
  const ExperimentConfig r = resolve_config(c);
  CHECK(r.n == 1);
  CHECK(r.paths == 100000);
  CHECK(r.steps == 1000);
  CHECK(r.params.at("amplitude").get<double>() == 0.25);
}

TEST_CASE("reports: serialization shape and reruns reproduce bit for bit") {
  ExperimentConfig c;
  c.experiment = "borell-euclidean";
  c.paths = 2000;
  c.steps = 100;
  c.seed = 123;
  const ExperimentReport a = run_experiment(c);
  const ExperimentReport b = run_experiment(c);
  CHECK(a.all_pass());
  const json ja = report_to_json(a);
  const json jb = report_to_json(b);
  CHECK(reports_equivalent(ja, jb));
  CHECK(ja.contains("config"));
  CHECK(ja.contains("version"));
  CHECK(ja.contains("checks"));
  CHECK(ja.contains("wallclock_seconds"));
  CHECK(ja.at("config").at("experiment") == "borell-euclidean");
  for (const auto& row : ja.at("checks")) {
    CHECK(row.contains("name"));
    CHECK(row.contains("value"));
    CHECK(row.contains("stderr"));
    CHECK(row.contains("oracle"));
    CHECK(row.contains("tol"));
    CHECK(row.contains("pass"));
  }

  // a different seed must change at least one Monte Carlo estimate
  ExperimentConfig c2 = c;
  c2.seed = 124;
  const json jc = report_to_json(run_experiment(c2));
  CHECK_FALSE(reports_equivalent(ja, jc));

  // worker count does not alter any estimate
  ExperimentConfig c3 = c;
  c3.workers = 1;
  ExperimentConfig c4 = c;
  c4.workers = 2;
  const json j3 = report_to_json(run_experiment(c3));
  const json j4 = report_to_json(run_experiment(c4));
  CHECK(j3.at("checks").dump() == j4.at("checks").dump());

  // csv mirrors the checks table
  const std::string csv = report_to_csv(a);
  CHECK(csv.rfind("name,value,stderr,oracle,tol,pass\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + a.checks.size());
}
