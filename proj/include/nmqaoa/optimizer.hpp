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

#include <functional>
#include <memory>
#include <vector>

#include "nmqaoa/augmented_model.hpp"
#include "nmqaoa/lindblad.hpp"
#include "nmqaoa/schedule.hpp"
#include "nmqaoa/trajectory.hpp"

namespace nmqaoa {

struct OptimizerConfig {
  double xi = 0.01;
  double upsilon = 0.05;
  double eta = 1e-4;
  double epsilon = 1e-3;  // ns
  int max_iters = 200;
  void validate() const;
  bool operator==(const OptimizerConfig&) const = default;
};

/// Final principal state of one schedule and its cost expectation.
struct Evaluation {
  double h = 0.0;
  /// Principal density matrix, or its diagonal as a column when `diagonal` is set.
  ComplexMatrix rho_p;
  bool diagonal = false;
};

/// Evolution backend mapping a schedule to tr(H rho_p(tau)). Implementations are safe to call
/// concurrently.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual Evaluation evaluate(const ControlSchedule& schedule) const = 0;
};

/// Master-equation backend.
class MasterEvaluator : public Evaluator {
 public:
  MasterEvaluator(OpenSystem sys, ComplexMatrix h, ComplexMatrix h_mix, SolverConfig cfg);
  Evaluation evaluate(const ControlSchedule& schedule) const override;

 private:
  OpenSystem sys_;
  ComplexMatrix h_, h_mix_, rho0_;
  SolverConfig cfg_;
};

/// Trajectory backend. Every evaluation uses the same seeds, so finite differences see common
/// random numbers.
class TrajectoryEvaluator : public Evaluator {
 public:
  TrajectoryEvaluator(OpenSystem sys, ComplexMatrix h, ComplexMatrix h_mix, TrajectoryConfig cfg,
                      int workers, Accumulate kind = Accumulate::Principal);
  Evaluation evaluate(const ControlSchedule& schedule) const override;

 private:
  OpenSystem sys_;
  ComplexMatrix h_, h_mix_;
  StateVector phi0_;
  TrajectoryConfig cfg_;
  int workers_;
  Accumulate kind_;
};

/// Scalar function of the schedule; rho_p is left empty.
class FunctionEvaluator : public Evaluator {
 public:
  explicit FunctionEvaluator(std::function<double(const ControlSchedule&)> f) : f_(std::move(f)) {}
  Evaluation evaluate(const ControlSchedule& schedule) const override { return {f_(schedule), {}, false}; }

 private:
  std::function<double(const ControlSchedule&)> f_;
};

struct ObjectiveValue {
  double h = 0.0;
  double y = 0.0;
};

/// h = tr(H rho_p), y = h + xi * ||tau||_1.
ObjectiveValue objective(const ControlSchedule& schedule, const Evaluator& evaluator, double xi);

/// Componentwise proximal map of t*||.||_1, then clamped at zero when `clamp` is set.
std::vector<double> soft_threshold(const std::vector<double>& d, double threshold, bool clamp = true);

/// Central differences of h; forward differences for components with tau_i < epsilon.
/// `h_at_tau` avoids re-evaluating the base point when a forward difference is needed.
std::vector<double> finite_diff_gradient(const ControlSchedule& schedule, const Evaluator& evaluator,
                                         double epsilon, int workers = 1,
                                         const double* h_at_tau = nullptr);

struct IterationRecord {
  int iteration = 0;
  std::vector<double> tau;
  double h = 0.0;
  double y = 0.0;
  int effective_depth = 0;
  double wall_time = 0.0;  // seconds since the start of optimize()
};

struct OptimizationTrace {
  std::vector<IterationRecord> records;  // records[0] is the initial point
  bool converged = false;
  int iterations() const { return records.empty() ? 0 : static_cast<int>(records.size()) - 1; }
};

struct OptimizationResult {
  ControlSchedule best;
  ObjectiveValue best_value;
  Evaluation best_evaluation;
  OptimizationTrace trace;
};

/// Proximal gradient: d = tau - upsilon grad h, tau <- soft_threshold(d, xi upsilon), until
/// |h_k - h_{k-1}| < eta or max_iters. Returns the best iterate by y.
OptimizationResult optimize(const ControlSchedule& schedule0, const OptimizerConfig& cfg,
                            const Evaluator& evaluator, int workers = 1);

}  // namespace nmqaoa
