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

#include <cstddef>
#include <functional>
#include <vector>

#include "nmqaoa/augmented_model.hpp"
#include "nmqaoa/operators.hpp"
#include "nmqaoa/schedule.hpp"

namespace nmqaoa {

struct DenseJump {
  ComplexMatrix op;
  double gamma = 0.0;
};

/// Reference generator: -i[H, rho] + sum_f gamma_f (L rho L^dag - {L^dag L, rho}/2).
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h_total,
                           const std::vector<DenseJump>& jumps);

struct SolverConfig {
  double dt = 1e-3;  // ns
  void validate() const;
};

/// Generator of one control segment, compiled to sparse form.
/// rhs(rho) = -i H_e rho + i rho H_e^dag + sum_f gamma_f L_f rho L_f^dag with
/// H_e = H - (i/2) sum_f gamma_f L_f^dag L_f.
class LindbladGenerator {
 public:
  LindbladGenerator(const OpenSystem& sys, const ComplexMatrix& h_p);
  LindbladGenerator(const SparseOperator& h_total, std::vector<JumpOperator> jumps);

  Index dim() const { return h_eff_.rows(); }
  const SparseOperator& h_eff() const { return h_eff_; }

  /// Upper bound on the magnitude of the generator spectrum (1/ns).
  double spectral_bound() const { return bound_; }

  /// out = rhs(rho); `a` and `m` are scratch buffers of the same shape.
  void apply(const RowMatrix& rho, RowMatrix& out, RowMatrix& a, RowMatrix& m) const;

 private:
  void compile(const SparseOperator& h_total);

  SparseOperator h_eff_;
  std::vector<JumpOperator> jumps_;
  double bound_ = 0.0;
};

/// Classical fourth-order Runge-Kutta stepper owning its work buffers.
class Rk4Integrator {
 public:
  /// Largest dt * spectral_bound accepted (RK4 stability along the imaginary axis is 2.83).
  static constexpr double kStabilityLimit = 2.8;
  /// Dense D x D buffers held by the integrator.
  static constexpr int kWorkBuffers = 5;

  explicit Rk4Integrator(Index dim);

  void step(RowMatrix& rho, const LindbladGenerator& g, double dt);

  /// Integrates over `duration` with steps of at most dt; the last step lands exactly on the end.
  void advance(RowMatrix& rho, const LindbladGenerator& g, double duration, double dt);

 private:
  RowMatrix acc_, stage_, k_, a_, m_;
};

/// Throws SolverError when dt is outside the RK4 stability region of the generator.
void check_step_size(const LindbladGenerator& g, double dt);

ComplexMatrix evolve_segment(const ComplexMatrix& rho, const ComplexMatrix& h_p, const OpenSystem& sys,
                             double duration, const SolverConfig& cfg);

/// Called with (time in ns, full density matrix) at every sample point.
using SampleObserver = std::function<void(double, const RowMatrix&)>;

struct PiecewiseResult {
  ComplexMatrix rho;
  ComplexMatrix rho_p;
  /// Largest population of any mode's top Fock level seen at segment ends.
  double max_top_population = 0.0;
};

struct SamplingOptions {
  double grid_dt = 0.0;  // <= 0 disables sampling
  SampleObserver observer;
};

/// Cost Hamiltonian h for zeta_j, then mixer h_mix for beta_j, j = 1..P.
PiecewiseResult evolve_piecewise(const ComplexMatrix& rho0, const ControlSchedule& schedule,
                                 const ComplexMatrix& h, const ComplexMatrix& h_mix,
                                 const OpenSystem& sys, const SolverConfig& cfg,
                                 const SamplingOptions& sampling = {});

/// Principal-space master equation with the given channels.
ComplexMatrix evolve_markovian(const ComplexMatrix& rho_p0, const ControlSchedule& schedule,
                               const ComplexMatrix& h, const ComplexMatrix& h_mix,
                               const std::vector<DenseJump>& rates, const SolverConfig& cfg);

/// |+...+>
StateVector plus_state(int n_qubits);
/// |+...+><+...+|
ComplexMatrix uniform_superposition(int n_qubits);

/// Heap bytes the master-equation path holds at its peak for a system of dimension dim
/// with the given sparse operator footprint.
std::size_t projected_master_bytes(Index dim, std::size_t sparse_bytes);

/// Storage of a compressed sparse operator.
std::size_t sparse_bytes(const SparseOperator& s);

}  // namespace nmqaoa
