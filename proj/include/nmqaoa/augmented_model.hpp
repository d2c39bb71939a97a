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

#include <vector>

#include "json.hpp"

#include "nmqaoa/operators.hpp"

namespace nmqaoa {

/// One damped oscillator realizing a Lorentzian noise peak. Frequencies in GHz.
struct LorentzianMode {
  double omega_a = 10.0;
  double gamma = 0.6;
  double kappa = 1.0;
  int levels = 8;

  void validate() const;
  nlohmann::json to_json() const;
  static LorentzianMode from_json(const nlohmann::json& j);
  bool operator==(const LorentzianMode&) const = default;
};

struct JumpOperator {
  SparseOperator op;  // full-space operator
  double gamma = 0.0;
};

/// Generator data shared by both solvers: a principal register tensored with an environment
/// factor of dimension dim_a (1 for a purely Markovian register).
struct OpenSystem {
  int n_qubits = 0;
  Index dim_p = 0;
  Index dim_a = 1;
  SparseOperator h_static;  // environment Hamiltonian plus interaction, full space
  std::vector<JumpOperator> jumps;
  std::vector<SparseOperator> top_level_projectors;  // truncation monitors, one per mode

  Index dim() const { return dim_p * dim_a; }

  /// h_p (x) I_a, sparse.
  SparseOperator lift(const ComplexMatrix& h_p) const;

  /// rho_p (x) |0><0| on every environment factor.
  ComplexMatrix initial_state(const ComplexMatrix& rho_p) const;
  StateVector initial_vector(const StateVector& phi_p) const;
};

class AugmentedModel {
 public:
  static constexpr Index kMaxDim = Index{1} << 16;

  AugmentedModel(int n_qubits, std::vector<LorentzianMode> modes);

  int n_qubits() const { return n_qubits_; }
  const std::vector<LorentzianMode>& modes() const { return modes_; }
  Index dim_p() const { return dim_p_; }
  Index dim_a() const { return dim_a_; }
  Index dim() const { return dim_p_ * dim_a_; }

  // Full-space operators, principal (x) ancilla ordering.
  const SparseOperator& h_a() const { return h_a_; }
  const SparseOperator& h_pa() const { return h_pa_; }
  const std::vector<JumpOperator>& jumps() const { return jumps_; }

  ComplexMatrix h_a_dense() const { return ComplexMatrix(h_a_); }
  ComplexMatrix h_pa_dense() const { return ComplexMatrix(h_pa_); }

  /// Lowering operator of mode f on the ancilla factor alone.
  ComplexMatrix mode_annihilation(std::size_t f) const;

  /// Number operator of the top Fock level of mode f, full space.
  SparseOperator top_level_projector(std::size_t f) const;

  OpenSystem system() const;

 private:
  int n_qubits_;
  std::vector<LorentzianMode> modes_;
  Index dim_p_;
  Index dim_a_;
  SparseOperator h_a_;
  SparseOperator h_pa_;
  std::vector<JumpOperator> jumps_;
  std::vector<SparseOperator> ancilla_lowering_;  // per mode, ancilla factor only
};

/// Principal register with sigma_y dephasing-type channels of rate `rate` on every qubit.
OpenSystem markovian_system(int n_qubits, double rate);

/// Register without any environment.
OpenSystem closed_system(int n_qubits);

/// Sum over modes of kappa (gamma^2/4) / (gamma^2/4 + (omega - omega_a)^2).
double spectrum_value(const std::vector<LorentzianMode>& modes, double omega);

/// |Gamma(-i omega)|^2 for the single-mode realization with K = -sqrt(gamma)/2, N = sqrt(gamma).
double transfer_function_gain(const LorentzianMode& mode, double omega);

}  // namespace nmqaoa
