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
#include <memory>
#include <vector>

#include "nmqaoa/augmented_model.hpp"
#include "nmqaoa/lindblad.hpp"
#include "nmqaoa/operators.hpp"
#include "nmqaoa/schedule.hpp"

namespace nmqaoa {

struct TrajectoryConfig {
  int n_traj = 1000;
  double dt = 1e-3;  // ns
  std::uint64_t base_seed = 42;
  void validate() const;
};

/// H - (i/2) sum_f gamma_f L_f^dag L_f.
ComplexMatrix effective_hamiltonian(const ComplexMatrix& h_total, const std::vector<DenseJump>& jumps);

/// Bound on the first-order jump probability of a single step.
inline constexpr double kMaxJumpProbability = 0.1;

/// One step with the first-order jump rule. Returns the new normalized state; `jumped`
/// receives the index of the fired channel or -1.
StateVector trajectory_step(const StateVector& phi, const ComplexMatrix& h_e,
                            const std::vector<DenseJump>& jumps, double dt, double r1, double r2,
                            int* jumped = nullptr);

/// Channel fired for the given per-channel probabilities and r2, ordering channels by descending
/// probability with ties broken by index.
std::size_t select_channel(const std::vector<double>& dp, double r2);

/// Applies exp(-i H_e t) to vectors. Dense matrices up to kDenseLimit, sparse Taylor series above.
class NonHermitianPropagator {
 public:
  static constexpr Index kDenseLimit = 256;

  NonHermitianPropagator(const SparseOperator& h_e, double t);
  /// out = exp(-i H_e t) in; s1, s2 are scratch vectors.
  void apply(const StateVector& in, StateVector& out, StateVector& s1, StateVector& s2) const;
  bool dense() const { return dense_; }

 private:
  bool dense_;
  ComplexMatrix u_;
  SparseOperator a_;  // -i H_e t / substeps
  int substeps_ = 1;
};

struct TrajectoryOutcome {
  StateVector phi;
  std::uint64_t seed = 0;
  int jumps = 0;
};

/// Piecewise unraveling over a whole schedule with random numbers drawn from CounterStream(seed),
/// one draw per step index.
TrajectoryOutcome run_trajectory(const StateVector& phi0, const ControlSchedule& schedule,
                                 const ComplexMatrix& h, const ComplexMatrix& h_mix,
                                 const OpenSystem& sys, double dt, std::uint64_t seed);

/// Which part of each trajectory's projector is accumulated.
enum class Accumulate { Full, Principal, Diagonal };

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  int jumps = 0;
};

struct TrajectoryEnsembleResult {
  /// Averaged density matrix: full, principal, or principal diagonal as a column.
  ComplexMatrix rho;
  Accumulate kind = Accumulate::Principal;
  std::vector<TrajectoryRecord> per_traj;
  /// Standard error of the mean of tr(H rho_k) over trajectories (0 when no observable given).
  double std_err_estimate = 0.0;
  double mean_jumps() const;
};

/// (1/N) sum_k |phi_k><phi_k| with a fixed pairwise tree.
TrajectoryEnsembleResult ensemble_average(const std::vector<StateVector>& phis);

/// Runs n_traj trajectories with seeds base_seed ^ k and reduces them with a pairwise tree whose
/// shape depends only on n_traj. `h_obs` is the principal-space observable for the standard error.
TrajectoryEnsembleResult run_ensemble(const StateVector& phi0, const ControlSchedule& schedule,
                                      const ComplexMatrix& h, const ComplexMatrix& h_mix,
                                      const OpenSystem& sys, const TrajectoryConfig& cfg,
                                      int workers, Accumulate kind = Accumulate::Principal,
                                      const ComplexMatrix* h_obs = nullptr);

}  // namespace nmqaoa
