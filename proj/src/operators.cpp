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

#include "nmqaoa/operators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "nmqaoa/error.hpp"

namespace nmqaoa {

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix x() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix y() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = -kI;
  m(1, 0) = kI;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}
}  // namespace pauli

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  ComplexMatrix out(ra * rb, ca * cb);
  for (Index i = 0; i < ra; ++i) {
    for (Index j = 0; j < ca; ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed_qubit_op(const ComplexMatrix& op, int index, int n_qubits) {
  if (op.rows() != 2 || op.cols() != 2) {
    throw InvalidArgument("embed_qubit_op: operator must be 2x2");
  }
  if (n_qubits < 1 || index < 1 || index > n_qubits) {
    throw InvalidArgument("embed_qubit_op: index " + std::to_string(index) +
                          " out of range for " + std::to_string(n_qubits) + " qubits");
  }
  const Index left = Index{1} << (index - 1);
  const Index right = Index{1} << (n_qubits - index);
  return kron(kron(ComplexMatrix::Identity(left, left), op),
              ComplexMatrix::Identity(right, right));
}

ComplexMatrix annihilation(int levels) {
  if (levels < 2) {
    throw InvalidArgument("annihilation: levels must be >= 2");
  }
  ComplexMatrix a = ComplexMatrix::Zero(levels, levels);
  for (int k = 1; k < levels; ++k) {
    a(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  return a;
}

namespace {
template <typename M>
ComplexMatrix partial_trace_impl(const M& rho, Index dim_p, Index dim_a) {
  if (dim_p < 1 || dim_a < 1 || rho.rows() != dim_p * dim_a || rho.cols() != rho.rows()) {
    throw InvalidArgument("partial_trace_ancilla: dimension mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_p, dim_p);
  for (Index q = 0; q < dim_p; ++q) {
    for (Index p = 0; p < dim_p; ++p) {
      Complex s = 0.0;
      for (Index j = 0; j < dim_a; ++j) {
        s += rho(p * dim_a + j, q * dim_a + j);
      }
      out(p, q) = s;
    }
  }
  return out;
}
}  // namespace

ComplexMatrix partial_trace_ancilla(const ComplexMatrix& rho, Index dim_p, Index dim_a) {
  return partial_trace_impl(rho, dim_p, dim_a);
}

ComplexMatrix partial_trace_ancilla(const RowMatrix& rho, Index dim_p, Index dim_a) {
  return partial_trace_impl(rho, dim_p, dim_a);
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("hermiticity_defect: matrix is not square");
  }
  double worst = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    }
  }
  return worst;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() && hermiticity_defect(a) < tol;
}

double min_eigenvalue(const ComplexMatrix& a) {
  const ComplexMatrix herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2) {
  if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols() || rho1.rows() != rho1.cols()) {
    throw InvalidArgument("trace_distance: dimension mismatch");
  }
  const ComplexMatrix diff = rho1 - rho2;
  if (hermiticity_defect(diff) > 1e-8) {
    throw InvalidArgument("trace_distance: inputs are not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (diff + diff.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

ComplexMatrix expm_propagator(const ComplexMatrix& h, double dt) {
  if (h.rows() != h.cols()) {
    throw InvalidArgument("expm_propagator: matrix is not square");
  }
  if (!(dt > 0.0)) {
    throw InvalidArgument("expm_propagator: dt must be positive");
  }
  const ComplexMatrix exponent = (-kI * dt) * h;
  return exponent.exp();
}

SparseOperator to_sparse(const ComplexMatrix& a) {
  std::vector<Eigen::Triplet<Complex>> trip;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != Complex(0.0, 0.0)) trip.emplace_back(i, j, a(i, j));
    }
  }
  SparseOperator s(a.rows(), a.cols());
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

SparseOperator sparse_identity(Index dim) {
  SparseOperator s(dim, dim);
  s.setIdentity();
  return s;
}

SparseOperator sparse_kron(const SparseOperator& a, const SparseOperator& b) {
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseOperator::InnerIterator ia(a, i); ia; ++ia) {
      for (Index k = 0; k < b.outerSize(); ++k) {
        for (SparseOperator::InnerIterator ib(b, k); ib; ++ib) {
          trip.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                            ia.value() * ib.value());
        }
      }
    }
  }
  SparseOperator s(a.rows() * b.rows(), a.cols() * b.cols());
  s.setFromTriplets(trip.begin(), trip.end());
  s.prune(Complex(0.0, 0.0));
  return s;
}

}  // namespace nmqaoa
