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

#include "nmqaoa/augmented_model.hpp"
#include "nmqaoa/lindblad.hpp"
#include "nmqaoa/maxcut.hpp"
#include "nmqaoa/optimizer.hpp"
#include "nmqaoa/schedule.hpp"

namespace nmqaoa {

struct DistanceTrace {
  std::vector<double> times;      // ns, strictly increasing
  std::vector<double> distances;  // D(rho_1(t), rho_2(t))
  /// Final principal state of the |+...+> run.
  ComplexMatrix final_rho_plus;
};

struct NonMarkovReport {
  double n_phi = 0.0;
  double t_e = 0.0;      // ns
  double sigma_bar = 0.0;  // 1/ns
};

/// How intervals with zero change enter the increase time.
enum class IncreaseTime {
  Strict,   // only intervals where D grows
  Literal,  // (1 + sgn(dD)) / 2 weighting: flat intervals count half
};

/// Changes of D at or below this magnitude are treated as flat (integration round-off).
inline constexpr double kFlatTolerance = 1e-12;

/// Evolves |+...+> and |-...-> (each with the environment in its ground state) through the same
/// piecewise process and samples their principal trace distance every grid_dt.
DistanceTrace distance_trace(const OpenSystem& sys, const ControlSchedule& schedule, const ComplexMatrix& h,
                             const ComplexMatrix& h_mix, double grid_dt, const SolverConfig& cfg);

/// Sum of the positive increments of D.
double blp_measure(const DistanceTrace& trace);

NonMarkovReport exploration_rate(const DistanceTrace& trace, IncreaseTime mode = IncreaseTime::Strict);

enum class SweepParam { OmegaA, Kappa, Gamma };
SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam p);

struct SweepBase {
  WeightedGraph graph;
  std::vector<LorentzianMode> modes;  // the swept parameter is applied to modes[0]
  ControlSchedule schedule;
  SolverConfig solver;
  double grid_dt = 0.01;
  /// When set, each point is also optimized from `schedule` and re-measured.
  std::optional<OptimizerConfig> optimizer;
  /// Solver step used inside the optimizer loop (defaults to solver.dt).
  std::optional<double> optimizer_dt;
};

struct SweepPoint {
  double value = 0.0;
  double n_phi_initial = 0.0;
  double n_phi_optimized = 0.0;  // NaN when not optimized
  double r_initial = 0.0;
  double r_optimized = 0.0;      // NaN when not optimized
  double sigma_bar = 0.0;        // initial schedule
};

std::vector<SweepPoint> sweep_parameter(const SweepBase& base, SweepParam param,
                                        const std::vector<double>& values, int workers = 1);

struct ExplorePoint {
  std::vector<double> tau;
  double sigma_bar = 0.0;
  double n_phi = 0.0;
  double t_e = 0.0;
  double r = 0.0;
};

/// Random depth-2 schedules with tau_i uniform in [lo, hi], drawn from a counter-based stream.
std::vector<ExplorePoint> explore_scatter(const WeightedGraph& graph, const std::vector<LorentzianMode>& modes,
                                          int n_samples, double lo, double hi, std::uint64_t seed,
                                          const SolverConfig& solver, double grid_dt, int workers = 1);

}  // namespace nmqaoa
