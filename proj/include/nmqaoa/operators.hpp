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

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace nmqaoa {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Dense square operator; also the carrier for density matrices and propagators.
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Row-major dense storage used for density matrices inside the integrators.
using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Row-major compressed operator used by the integration kernels.
using SparseOperator = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

inline constexpr Complex kI{0.0, 1.0};

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

/// Kronecker product; `a` is the slow (left) index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// I^(index-1) (x) op (x) I^(n-index) for a 2x2 `op`. Qubit 1 is the leftmost factor.
ComplexMatrix embed_qubit_op(const ComplexMatrix& op, int index, int n_qubits);

/// Truncated bosonic lowering operator with A(k-1, k) = sqrt(k).
ComplexMatrix annihilation(int levels);

/// Traces out the ancilla of a principal (x) ancilla ordered operator.
ComplexMatrix partial_trace_ancilla(const ComplexMatrix& rho, Index dim_p, Index dim_a);
ComplexMatrix partial_trace_ancilla(const RowMatrix& rho, Index dim_p, Index dim_a);

/// Half the sum of absolute eigenvalues of rho1 - rho2.
double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2);

/// exp(-i h dt) by scaling and squaring with a Pade approximant.
ComplexMatrix expm_propagator(const ComplexMatrix& h, double dt);

/// max |A - A^dagger| over all entries.
double hermiticity_defect(const ComplexMatrix& a);

bool is_hermitian(const ComplexMatrix& a, double tol = 1e-10);

/// Smallest eigenvalue of the Hermitian part of `a`.
double min_eigenvalue(const ComplexMatrix& a);

// Sparse helpers for the solvers. Exact zeros are dropped.
SparseOperator to_sparse(const ComplexMatrix& a);
SparseOperator sparse_identity(Index dim);
SparseOperator sparse_kron(const SparseOperator& a, const SparseOperator& b);

}  // namespace nmqaoa
