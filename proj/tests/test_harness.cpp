#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "proclab/harness.hpp"

using namespace proclab;
using namespace proclab::harness;

namespace {

// Scaled-down configurations that run in well under a second each.
ExperimentConfig small(Experiment e) {
  auto c = default_config(e);
  switch (e) {
    case Experiment::cov_check: c.n_paths = 400; break;
    case Experiment::swanson: c.n_paths = 31; c.replicates = 60; break;
    case Experiment::bk_rate: c.grid = {0.0, 2.0, 9}; c.n_list = {64, 128, 256, 512}; c.replicates = 8; break;
    case Experiment::lil_trace: c.grid = {0.0, 2.0, 9}; c.n_list = {16, 32, 64}; c.n_paths = 500; break;
    case Experiment::brackets: c.grid = {0.0, 2.0, 17}; c.n_paths = 150; c.probes = 100; break;
    case Experiment::rates: c.replicates = 50; break;
    case Experiment::limit_sim: c.n_paths = 600; break;
    case Experiment::prop3: c.replicates = 20; break;
  }
  return c;
}

}  // namespace

TEST_CASE("experiment names") {
  for (auto e : all_experiments()) CHECK(parse_experiment(to_string(e)) == e);
  CHECK(to_string(Experiment::bk_rate) == "bk-rate");
  CHECK_THROWS_AS(parse_experiment("nope"), UsageError);
  CHECK(all_experiments().size() == 8);
}

TEST_CASE("grid parsing") {
  const auto g = parse_grid("0:2:33");
  CHECK(g.t_min == 0.0);
  CHECK(g.t_max == 2.0);
  CHECK(g.count == 33);
  CHECK(g.build().size() == 33);
  CHECK(parse_grid("0.5:1.5:3").t_min == 0.5);
  CHECK_THROWS_AS(parse_grid("0:2"), UsageError);
  CHECK_THROWS_AS(parse_grid("0:2:1"), UsageError);
  CHECK_THROWS_AS(parse_grid("2:1:5"), UsageError);
  CHECK_THROWS_AS(parse_grid("a:b:c"), UsageError);
  CHECK_THROWS_AS(parse_grid("0:2:5:7"), UsageError);
}

TEST_CASE("config validation and JSON overrides") {
  auto c = default_config(Experiment::cov_check);
  CHECK_NOTHROW(c.validate());
  c.hurst = 1.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = default_config(Experiment::cov_check);
  c.format = "xml";
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = default_config(Experiment::bk_rate);
  c.grid = {0.5, 2.0, 9};
  CHECK_THROWS_AS(c.validate(), UsageError);

  c = default_config(Experiment::prop3);
  apply_json(c, nlohmann::json::parse(R"({"hurst": 0.3, "n_paths": 21, "grid": "0:1:5", "method": "circulant"})"));
  CHECK(c.hurst == 0.3);
  CHECK(c.n_paths == 21);
  CHECK(c.grid.count == 5);
  CHECK(c.method == fbm::Method::circulant);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse(R"({"bogus": 1})")), UsageError);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse(R"({"hurst": "high"})")), UsageError);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse("[1, 2]")), UsageError);
}

TEST_CASE("usage errors from experiments") {
  auto s = small(Experiment::swanson);
  s.n_paths = 30;
  CHECK_THROWS_AS(run(s), UsageError);
  s = small(Experiment::swanson);
  s.hurst = 0.3;
  CHECK_THROWS_AS(run(s), UsageError);
  auto b = small(Experiment::bk_rate);
  b.n_list = {64, 128, 256};
  CHECK_THROWS_AS(run(b), UsageError);
  b.n_list = {64, 100, 256, 512};
  CHECK_THROWS_AS(run(b), UsageError);
  auto l = small(Experiment::lil_trace);
  l.n_list = {8};
  CHECK_THROWS_AS(run(l), UsageError);
}

TEST_CASE("report rows and CSV") {
  ReportRow r{"x", 1.5, std::nullopt, 1.0, 0.25, Compare::within};
  CHECK(r.pass() == std::optional<bool>(false));
  r.compare = Compare::at_least;
  CHECK(*r.pass());
  r.compare = Compare::at_most;
  CHECK_FALSE(*r.pass());
  r.estimate = NAN;
  CHECK_FALSE(*r.pass());
  ReportRow info{"y", 2.0};
  CHECK_FALSE(info.pass().has_value());

  ExperimentReport rep;
  rep.add({"a", 0.1, 0.01, 0.0, 0.5, Compare::within});
  rep.add({"b", 3.0});
  CHECK(rep.pass());
  CHECK(rep.csv() == "name,estimate,std_error,target,tol,pass\na,0.10000000000000001,0.01,0,0.5,true\nb,3,NA,NA,NA,NA\n");
  rep.add({"c", 2.0, std::nullopt, 0.0, 1.0, Compare::at_most});
  CHECK_FALSE(rep.pass());
}

TEST_CASE("JSON report carries the run metadata") {
  const auto rep = run(small(Experiment::prop3));
  const auto j = rep.to_json();
  CHECK(j["experiment"] == "prop3");
  CHECK(j["meta"]["version"] == "0.1.0");
  CHECK(j["meta"]["seed"] == 8);
  CHECK(j["meta"]["reproducible"] == true);
  CHECK(j["meta"]["params"]["n_paths"] == 17);
  CHECK(j["meta"].contains("seconds"));
  CHECK(j["meta"].contains("tolerance_convention"));
  CHECK(j["rows"].size() == rep.rows.size());
  CHECK(rep.pass());
}

TEST_CASE("seed 0 is recorded as non-reproducible") {
  auto c = small(Experiment::prop3);
  c.seed = 0;
  const auto rep = run(c);
  CHECK_FALSE(rep.reproducible);
  CHECK(rep.seed != 0);
  CHECK(rep.config.seed == rep.seed);
  CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("serial and parallel runs give identical reports") {
  for (auto e : all_experiments()) {
    CAPTURE(to_string(e));
    auto c = small(e);
    c.threads = 1;
    const auto serial = run(c).csv();
    c.threads = 3;
    const auto parallel = run(c).csv();
    CHECK(serial == parallel);
    CHECK(serial.rfind("name,estimate,std_error,target,tol,pass\n", 0) == 0);
  }
}

TEST_CASE("rates table") {
  std::ostringstream out;
  write_rates_table(default_config(Experiment::rates), out);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 20);
  CHECK(text.find("\n0.5,6,1.5,") != std::string::npos);
}
