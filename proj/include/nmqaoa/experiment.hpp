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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nmqaoa/augmented_model.hpp"
#include "nmqaoa/lindblad.hpp"
#include "nmqaoa/maxcut.hpp"
#include "nmqaoa/optimizer.hpp"
#include "nmqaoa/schedule.hpp"
#include "nmqaoa/trajectory.hpp"

namespace nmqaoa {

enum class Environment {
  Augmented,          // qubits coupled to the ancillary oscillator modes
  Markovian,          // sigma_y channels of rate markovian_rate on every qubit
  MarkovianWideband,  // augmented model with every gamma scaled by wideband_factor
  Closed,             // no environment
};

enum class Backend { Master, Trajectory };

struct SolverSection {
  Backend type = Backend::Master;
  double dt = 1e-3;
  int n_traj = 1000;
  std::uint64_t seed = 42;
  bool operator==(const SolverSection&) const = default;
};

struct OptimizerSection {
  bool enabled = true;
  OptimizerConfig config;
  std::vector<double> init{3, 3, 3, 3};
  /// Integration step inside the optimization loop; the final state is re-evaluated at solver.dt.
  std::optional<double> dt;
  bool operator==(const OptimizerSection&) const = default;
};

struct MetricsSection {
  bool blp = false;
  double grid_dt = 0.01;
  bool operator==(const MetricsSection&) const = default;
};

struct SweepSection {
  std::string param = "kappa";
  std::vector<double> values{0.1, 0.5, 1.0, 2.0, 5.0};
  bool optimize = false;
  bool operator==(const SweepSection&) const = default;
};

struct ExploreSection {
  int n_samples = 28;
  double tau_min = 0.5;
  double tau_max = 4.0;
  std::uint64_t seed = 7;
  bool operator==(const ExploreSection&) const = default;
};

struct BenchmarkSection {
  std::vector<int> node_counts{5, 6, 7, 8};
  std::vector<int> traj_counts{500};
  std::vector<double> schedule{0.2, 0.2, 0.2, 0.2};
  double dt = 2e-3;
  std::uint64_t memory_cap_bytes = std::uint64_t{4} << 30;
  bool operator==(const BenchmarkSection&) const = default;
};

struct MultinodeSection {
  int node_min = 5;
  int node_max = 11;
  bool operator==(const MultinodeSection&) const = default;
};

struct ExperimentConfig {
  std::string name = "custom";
  WeightedGraph graph = fixtures::four_node();
  Environment environment = Environment::Augmented;
  std::vector<LorentzianMode> modes{LorentzianMode{}};
  double markovian_rate = 1.0;
  double wideband_factor = 100.0;
  SolverSection solver;
  OptimizerSection optimizer;
  std::vector<double> schedule{3, 3, 3, 3};
  MetricsSection metrics;
  SweepSection sweep;
  ExploreSection explore;
  BenchmarkSection benchmark;
  MultinodeSection multinode;
  int workers = 0;  // 0: NMQAOA_WORKERS or hardware concurrency

  bool operator==(const ExperimentConfig&) const = default;

  /// Throws ConfigError on any inconsistency.
  void validate() const;
  nlohmann::json to_json() const;
  /// Keys absent from `j` keep the values of the named "preset" (or the defaults).
  static ExperimentConfig from_json(const nlohmann::json& j);
};

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ExperimentConfig preset(const std::string& name);

ExperimentConfig load_config(const std::string& path);

/// Open system described by the configuration for the given graph size.
OpenSystem build_open_system(const ExperimentConfig& cfg, int n_qubits);

/// Formats a double with 12 significant digits.
std::string format_number(double v);

nlohmann::json cmd_solve(const ExperimentConfig& cfg, int workers);
std::string cmd_sweep(const ExperimentConfig& cfg, int workers);
std::string cmd_explore(const ExperimentConfig& cfg, int workers);

struct BenchmarkRecord {
  int n_nodes = 0;
  std::string backend;  // "master" or "trajectory"
  int n_traj = 0;
  std::string status;   // "ok" or "memory-limit"
  double wall_time = 0.0;          // s
  std::size_t peak_memory = 0;     // bytes above the level at the start of the solve
  std::size_t projected_memory = 0;
  double result_distance = 0.0;    // trace distance to the master result, NaN without one
  double time_ratio = 0.0;         // trajectory / master, NaN without a master run
  double memory_ratio = 0.0;
};

std::vector<BenchmarkRecord> run_benchmark(const ExperimentConfig& cfg, int workers);
std::string benchmark_csv(const std::vector<BenchmarkRecord>& records);
std::string cmd_benchmark(const ExperimentConfig& cfg, int workers);

struct MultinodeRow {
  int n_nodes = 0;
  double r = 0.0;
  double l1_norm = 0.0;
  int depth = 0;
  double h = 0.0;
  double optimal_probability = 0.0;
};

std::vector<MultinodeRow> run_multinode(const ExperimentConfig& cfg, int workers);
std::string cmd_multinode(const ExperimentConfig& cfg, int workers);

}  // namespace nmqaoa
