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

#include "nmqaoa/augmented_model.hpp"

#include <cmath>
#include <string>

#include "nmqaoa/error.hpp"

namespace nmqaoa {

void LorentzianMode::validate() const {
  if (!std::isfinite(omega_a)) throw InvalidArgument("mode: omega_a must be finite");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("mode: gamma must be > 0");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InvalidArgument("mode: kappa must be >= 0");
  if (levels < 2) throw InvalidArgument("mode: levels must be >= 2");
}

nlohmann::json LorentzianMode::to_json() const {
  return {{"omega_a", omega_a}, {"gamma", gamma}, {"kappa", kappa}, {"levels", levels}};
}

LorentzianMode LorentzianMode::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("mode: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "omega_a" && key != "gamma" && key != "kappa" && key != "levels") {
      throw ConfigError("mode: unknown key '" + key + "'");
    }
    if (!value.is_number()) throw ConfigError("mode: '" + key + "' must be a number");
  }
  LorentzianMode m;
  if (j.contains("omega_a")) m.omega_a = j.at("omega_a").get<double>();
  if (j.contains("gamma")) m.gamma = j.at("gamma").get<double>();
  if (j.contains("kappa")) m.kappa = j.at("kappa").get<double>();
  if (j.contains("levels")) {
    if (!j.at("levels").is_number_integer()) throw ConfigError("mode: levels must be an integer");
    m.levels = j.at("levels").get<int>();
  }
  try {
    m.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

SparseOperator OpenSystem::lift(const ComplexMatrix& h_p) const {
  if (h_p.rows() != dim_p || h_p.cols() != dim_p) {
    throw InvalidArgument("lift: principal operator has wrong dimension");
  }
  return sparse_kron(to_sparse(h_p), sparse_identity(dim_a));
}

ComplexMatrix OpenSystem::initial_state(const ComplexMatrix& rho_p) const {
  if (rho_p.rows() != dim_p || rho_p.cols() != dim_p) {
    throw InvalidArgument("initial_state: principal state has wrong dimension");
  }
  ComplexMatrix vac = ComplexMatrix::Zero(dim_a, dim_a);
  vac(0, 0) = 1.0;
  return kron(rho_p, vac);
}

StateVector OpenSystem::initial_vector(const StateVector& phi_p) const {
  if (phi_p.size() != dim_p) throw InvalidArgument("initial_vector: wrong dimension");
  StateVector phi = StateVector::Zero(dim());
  for (Index p = 0; p < dim_p; ++p) phi(p * dim_a) = phi_p(p);
  return phi;
}

AugmentedModel::AugmentedModel(int n_qubits, std::vector<LorentzianMode> modes)
    : n_qubits_(n_qubits), modes_(std::move(modes)) {
  if (n_qubits < 1 || n_qubits > 12) throw InvalidArgument("model: n_qubits must be in [1, 12]");
  if (modes_.empty()) throw InvalidArgument("model: at least one ancillary mode is required");
  dim_p_ = Index{1} << n_qubits;
  dim_a_ = 1;
  for (const auto& m : modes_) {
    m.validate();
    dim_a_ *= m.levels;
    if (dim_p_ * dim_a_ > kMaxDim) {
      throw InvalidArgument("model: dimension " + std::to_string(dim_p_) + "x" +
                            std::to_string(dim_a_) + " exceeds the 2^16 guard");
    }
  }

  // Collective sigma_y on the principal register.
  SparseOperator sy_sum(dim_p_, dim_p_);
  {
    std::vector<Eigen::Triplet<Complex>> trip;
    for (Index s = 0; s < dim_p_; ++s) {
      for (int q = 1; q <= n_qubits; ++q) {
        const int shift = n_qubits - q;
        const Index t = s ^ (Index{1} << shift);
        // <t| sigma_y |s>: |0> -> i|1>, |1> -> -i|0>
        const bool bit = ((s >> shift) & 1) != 0;
        trip.emplace_back(t, s, bit ? -kI : kI);
      }
    }
    sy_sum.setFromTriplets(trip.begin(), trip.end());
  }

  const SparseOperator id_p = sparse_identity(dim_p_);
  h_a_ = SparseOperator(dim(), dim());
  h_pa_ = SparseOperator(dim(), dim());
  Index before = 1;
  for (std::size_t f = 0; f < modes_.size(); ++f) {
    const auto& m = modes_[f];
    const Index after = dim_a_ / (before * m.levels);
    const SparseOperator a_mode =
        sparse_kron(sparse_kron(sparse_identity(before), to_sparse(annihilation(m.levels))),
                    sparse_identity(after));
    ancilla_lowering_.push_back(a_mode);
    const SparseOperator a_full = sparse_kron(id_p, a_mode);
    const SparseOperator ad_full = SparseOperator(a_full.adjoint());

    h_a_ += SparseOperator(Complex(m.omega_a) * (ad_full * a_full));
    jumps_.push_back({a_full, m.gamma});

    if (m.kappa > 0.0) {
      const SparseOperator c = Complex(-std::sqrt(m.gamma) / 2.0) * a_full;
      const SparseOperator z =
          Complex(std::sqrt(m.kappa)) * sparse_kron(sy_sum, sparse_identity(dim_a_));
      const SparseOperator cd = SparseOperator(c.adjoint());
      const SparseOperator zd = SparseOperator(z.adjoint());
      const SparseOperator term = SparseOperator(cd * z) - SparseOperator(zd * c);
      h_pa_ += SparseOperator(kI * term);
    }
    before *= m.levels;
  }
  h_a_.prune(Complex(0.0, 0.0));
  h_pa_.prune(Complex(0.0, 0.0));
}

ComplexMatrix AugmentedModel::mode_annihilation(std::size_t f) const {
  return ComplexMatrix(ancilla_lowering_.at(f));
}

SparseOperator AugmentedModel::top_level_projector(std::size_t f) const {
  const auto& m = modes_.at(f);
  Index before = 1;
  for (std::size_t k = 0; k < f; ++k) before *= modes_[k].levels;
  const Index after = dim_a_ / (before * m.levels);
  SparseOperator top(m.levels, m.levels);
  top.insert(m.levels - 1, m.levels - 1) = 1.0;
  top.makeCompressed();
  return sparse_kron(sparse_identity(dim_p_),
                     sparse_kron(sparse_kron(sparse_identity(before), top), sparse_identity(after)));
}

OpenSystem AugmentedModel::system() const {
  OpenSystem s;
  s.n_qubits = n_qubits_;
  s.dim_p = dim_p_;
  s.dim_a = dim_a_;
  s.h_static = h_a_ + h_pa_;
  s.jumps = jumps_;
  for (std::size_t f = 0; f < modes_.size(); ++f) s.top_level_projectors.push_back(top_level_projector(f));
  return s;
}

OpenSystem markovian_system(int n_qubits, double rate) {
  if (n_qubits < 1 || n_qubits > 12) throw InvalidArgument("markovian_system: bad qubit count");
  if (!(rate >= 0.0)) throw InvalidArgument("markovian_system: rate must be >= 0");
  OpenSystem s;
  s.n_qubits = n_qubits;
  s.dim_p = Index{1} << n_qubits;
  s.dim_a = 1;
  s.h_static = SparseOperator(s.dim_p, s.dim_p);
  if (rate > 0.0) {
    for (int q = 1; q <= n_qubits; ++q) {
      s.jumps.push_back({to_sparse(embed_qubit_op(pauli::y(), q, n_qubits)), rate});
    }
  }
  return s;
}

OpenSystem closed_system(int n_qubits) { return markovian_system(n_qubits, 0.0); }

double spectrum_value(const std::vector<LorentzianMode>& modes, double omega) {
  double s = 0.0;
  for (const auto& m : modes) {
    const double hw2 = m.gamma * m.gamma / 4.0;
    s += m.kappa * hw2 / (hw2 + (omega - m.omega_a) * (omega - m.omega_a));
  }
  return s;
}

double transfer_function_gain(const LorentzianMode& mode, double omega) {
  const double k = -std::sqrt(mode.gamma) / 2.0;
  const double n = std::sqrt(mode.gamma);
  const Complex s = -kI * omega;
  const Complex gamma_s = -k * n / (s + kI * mode.omega_a + 0.5 * n * n);
  return std::norm(gamma_s);
}

}  // namespace nmqaoa
