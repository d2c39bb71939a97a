// Copyright 2026 The nmqaoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "nmqaoa/error.hpp"
#include "nmqaoa/experiment.hpp"

using namespace nmqaoa;
using nlohmann::json;

TEST_CASE("config round trip for every preset") {
  for (const auto& name : preset_names()) {
    const ExperimentConfig c = preset(name);
    CHECK_NOTHROW(c.validate());
    CHECK(ExperimentConfig::from_json(c.to_json()) == c);
    CHECK(ExperimentConfig::from_json(json::parse(c.to_json().dump())) == c);
  }
}

TEST_CASE("preset overrides") {
  const ExperimentConfig c =
      ExperimentConfig::from_json(json::parse(R"({"preset": "sweep-gamma", "sweep": {"values": [0.5]}})"));
  CHECK(c.sweep.param == "gamma");
  CHECK(c.sweep.values == std::vector<double>{0.5});
  const ExperimentConfig t = ExperimentConfig::from_json(json::parse(R"({"graph": "table-6"})"));
  CHECK(t.graph == fixtures::table_prefix(6));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(preset("nope"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"bogus": 1})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"solver": {"dt": "x"}})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"solver": {"type": "exact"}})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"schedule": [1, 2, 3]})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"modes": [{"gamma": 0}]})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"multinode": {"node_range": [4, 9]}})")),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse("[]")), ConfigError);
  CHECK_THROWS_WITH_AS(
      ExperimentConfig::from_json(json::parse(R"({"graph": {"n_nodes": 4, "edges": []}})")),
      doctest::Contains("degenerate graph"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(2.5e-13) == "2.5e-13");
}

TEST_CASE("open system selection") {
  ExperimentConfig c;
  CHECK(build_open_system(c, 4).dim() == 128);
  c.environment = Environment::Markovian;
  CHECK(build_open_system(c, 4).dim() == 16);
  c.environment = Environment::Closed;
  CHECK(build_open_system(c, 4).jumps.empty());
  c.environment = Environment::MarkovianWideband;
  CHECK(build_open_system(c, 2).jumps.front().gamma == doctest::Approx(60.0));
}

TEST_CASE("solve command without optimization") {
  ExperimentConfig c = preset("paper-4node-closed");
  c.optimizer.enabled = false;
  c.schedule = {0.3, 0.2};
  c.solver.dt = 1e-2;
  const json out = cmd_solve(c, 1);
  CHECK(out.at("effective_depth") == 1);
  CHECK(out.at("probabilities").size() == 8);
  CHECK(out.at("c_min").get<double>() == doctest::Approx(-2.14));
  const double r = out.at("approximation_ratio").get<double>();
  CHECK((r > 0.0 && r < 1.0));
  CHECK(out.at("trace").empty());
}

TEST_CASE("sweep command emits one row per value") {
  ExperimentConfig c = preset("sweep-kappa");
  c.modes = {LorentzianMode{10.0, 0.6, 1.0, 4}};
  c.schedule = {0.2, 0.2};
  c.solver.dt = 1e-2;
  c.metrics.grid_dt = 0.05;
  c.sweep.values = {1.0};
  const std::string csv = cmd_sweep(c, 1);
  CHECK(csv.rfind("param_value,n_phi_initial,n_phi_optimized,r_initial,r_optimized,sigma_bar\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(cmd_sweep(c, 2) == csv);
}

TEST_CASE("explore command is deterministic") {
  ExperimentConfig c = preset("explore-single");
  c.modes = {LorentzianMode{10.0, 0.6, 1.0, 4}};
  c.explore.n_samples = 1;
  c.explore.tau_min = 0.1;
  c.explore.tau_max = 0.2;
  c.solver.dt = 1e-2;
  c.metrics.grid_dt = 0.05;
  const std::string a = cmd_explore(c, 1);
  CHECK(std::count(a.begin(), a.end(), '\n') == 2);
  CHECK(cmd_explore(c, 3) == a);
}

TEST_CASE("benchmark records") {
  ExperimentConfig c = preset("benchmark-table");
  c.modes = {LorentzianMode{10.0, 0.6, 1.0, 4}};
  c.benchmark.node_counts = {3};
  c.benchmark.traj_counts = {16};
  c.benchmark.schedule = {0.1, 0.1};
  c.benchmark.dt = 1e-2;
  auto recs = run_benchmark(c, 1);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].status == "ok");
  CHECK(recs[0].wall_time > 0.0);
  CHECK(recs[1].backend == "trajectory");
  CHECK(recs[1].result_distance < 0.5);

  c.benchmark.memory_cap_bytes = 1024;
  recs = run_benchmark(c, 1);
  CHECK(recs[0].status == "memory-limit");
  CHECK(recs[1].status == "ok");
  CHECK(std::isnan(recs[1].time_ratio));
  CHECK(benchmark_csv(recs).find("memory-limit") != std::string::npos);
}

TEST_CASE("multinode rows") {
  ExperimentConfig c = preset("multinode-table");
  c.modes = {LorentzianMode{10.0, 0.6, 1.0, 2}};
  c.solver.n_traj = 8;
  c.solver.dt = 1e-2;
  c.optimizer.config.max_iters = 1;
  c.optimizer.init = {0.1, 0.1};
  c.multinode = {5, 5};
  const auto rows = run_multinode(c, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n_nodes == 5);
  CHECK((rows[0].r >= 0.0 && rows[0].r <= 1.0));
  CHECK(rows[0].depth <= 1);
}
