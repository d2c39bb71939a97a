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
#include <numbers>

#include "doctest.h"
#include "nmqaoa/error.hpp"
#include "nmqaoa/operators.hpp"
#include "nmqaoa/philox.hpp"

using namespace nmqaoa;

namespace {

double max_abs(const ComplexMatrix& a) { return a.cwiseAbs().maxCoeff(); }

ComplexMatrix ket_projector(Index dim, Index k) {
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  p(k, k) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("kron") {
  CHECK(max_abs(kron(pauli::identity(), pauli::identity()) - ComplexMatrix::Identity(4, 4)) == 0.0);

  const ComplexMatrix zi = kron(pauli::z(), pauli::identity());
  Eigen::VectorXcd d(4);
  d << 1, 1, -1, -1;
  CHECK(max_abs(zi - ComplexMatrix(d.asDiagonal())) == 0.0);

  // sigma_x (x) sigma_y expanded by hand
  ComplexMatrix xy = ComplexMatrix::Zero(4, 4);
  xy(0, 3) = -kI;
  xy(1, 2) = kI;
  xy(2, 1) = -kI;
  xy(3, 0) = kI;
  CHECK(max_abs(kron(pauli::x(), pauli::y()) - xy) == 0.0);
}

TEST_CASE("embed_qubit_op") {
  const ComplexMatrix ixi = kron(kron(pauli::identity(), pauli::x()), pauli::identity());
  CHECK(max_abs(embed_qubit_op(pauli::x(), 2, 3) - ixi) == 0.0);
  CHECK(max_abs(embed_qubit_op(pauli::z(), 1, 1) - pauli::z()) == 0.0);

  StateVector v = StateVector::Zero(8);
  v(0) = 1.0;
  const StateVector w = embed_qubit_op(pauli::y(), 3, 3) * v;
  CHECK(std::abs(w(1) - kI) < 1e-15);
  CHECK(w.norm() == doctest::Approx(1.0));

  CHECK_THROWS_AS(embed_qubit_op(pauli::x(), 0, 3), InvalidArgument);
  CHECK_THROWS_AS(embed_qubit_op(pauli::x(), 4, 3), InvalidArgument);
  CHECK_THROWS_AS(embed_qubit_op(ComplexMatrix::Identity(3, 3), 1, 3), InvalidArgument);
}

TEST_CASE("annihilation") {
  ComplexMatrix a2 = annihilation(2);
  CHECK(a2(0, 1) == Complex(1.0));
  CHECK(std::abs(a2(1, 0)) == 0.0);
  ComplexMatrix a3 = annihilation(3);
  CHECK(a3(0, 1).real() == doctest::Approx(1.0));
  CHECK(a3(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
  ComplexMatrix n = annihilation(8).adjoint() * annihilation(8);
  for (int k = 0; k < 8; ++k) CHECK(n(k, k).real() == doctest::Approx(k));
  CHECK(max_abs(n - ComplexMatrix(n.diagonal().asDiagonal())) < 1e-14);
  CHECK_THROWS_AS(annihilation(0), InvalidArgument);
}

TEST_CASE("partial_trace_ancilla") {
  ComplexMatrix rho_p(2, 2);
  rho_p << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
  ComplexMatrix rho_a = ComplexMatrix::Zero(3, 3);
  rho_a(0, 0) = 0.5;
  rho_a(2, 2) = 0.5;
  CHECK(max_abs(partial_trace_ancilla(kron(rho_p, rho_a), 2, 3) - rho_p) < 1e-15);

  StateVector bell = StateVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix red = partial_trace_ancilla(ComplexMatrix(bell * bell.adjoint()), 2, 2);
  CHECK(max_abs(red - 0.5 * ComplexMatrix::Identity(2, 2)) < 1e-15);

  ComplexMatrix g = ComplexMatrix::Random(8, 8);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  const ComplexMatrix r = partial_trace_ancilla(rho, 4, 2);
  CHECK(std::abs(r.trace() - Complex(1.0)) < 1e-14);
  const RowMatrix rho_row = rho;
  CHECK(max_abs(partial_trace_ancilla(rho_row, 4, 2) - r) < 1e-15);
}

TEST_CASE("trace_distance") {
  const ComplexMatrix p0 = ket_projector(2, 0);
  const ComplexMatrix p1 = ket_projector(2, 1);
  CHECK(trace_distance(p0, p0) == doctest::Approx(0.0));
  CHECK(trace_distance(p0, p1) == doctest::Approx(1.0));
  const ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
  CHECK(trace_distance(plus, p0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(trace_distance(p0, ComplexMatrix::Identity(3, 3)), InvalidArgument);
}

TEST_CASE("expm_propagator") {
  CHECK(max_abs(expm_propagator(ComplexMatrix::Zero(4, 4), 1.3) - ComplexMatrix::Identity(4, 4)) < 1e-15);
  CHECK(max_abs(expm_propagator(pauli::x(), std::numbers::pi) + ComplexMatrix::Identity(2, 2)) < 1e-8);
  const ComplexMatrix u = expm_propagator(pauli::z(), 0.5);
  CHECK(std::abs(u(0, 0) - std::exp(Complex(0, -0.5))) < 1e-14);
  CHECK(std::abs(u(1, 1) - std::exp(Complex(0, 0.5))) < 1e-14);
  CHECK(std::abs(u(0, 1)) < 1e-15);

  // unitarity on a random Hermitian matrix
  ComplexMatrix g = ComplexMatrix::Random(6, 6);
  const ComplexMatrix h = g + g.adjoint();
  const ComplexMatrix v = expm_propagator(h, 0.7);
  CHECK(max_abs(v * v.adjoint() - ComplexMatrix::Identity(6, 6)) < 1e-12);
}

TEST_CASE("hermiticity and spectrum helpers") {
  CHECK(is_hermitian(pauli::y()));
  ComplexMatrix m = pauli::y();
  m(0, 1) += 1e-6;
  CHECK_FALSE(is_hermitian(m));
  CHECK(hermiticity_defect(m) == doctest::Approx(1e-6));
  CHECK(min_eigenvalue(pauli::x()) == doctest::Approx(-1.0));
}

TEST_CASE("sparse helpers agree with dense") {
  const ComplexMatrix a = embed_qubit_op(pauli::y(), 1, 2);
  const ComplexMatrix b = annihilation(3);
  const SparseOperator k = sparse_kron(to_sparse(a), to_sparse(b));
  CHECK(max_abs(ComplexMatrix(k) - kron(a, b)) == 0.0);
  CHECK(max_abs(ComplexMatrix(sparse_identity(5)) - ComplexMatrix::Identity(5, 5)) == 0.0);
  CHECK(to_sparse(pauli::z()).nonZeros() == 2);
}

TEST_CASE("philox known-answer vectors") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter stream") {
  const CounterStream s(42);
  const auto a = s.draw(7);
  const auto b = CounterStream(42).draw(7);
  CHECK(a.r1 == b.r1);
  CHECK(a.r2 == b.r2);
  CHECK(s.draw(8).r1 != a.r1);
  CHECK(CounterStream(43).draw(7).r1 != a.r1);
  CHECK(to_unit_double(0xffffffffu, 0xffffffffu) < 1.0);
  CHECK(to_unit_double(0, 0) == 0.0);
  double mean = 0.0;
  for (std::uint64_t i = 0; i < 20000; ++i) mean += s.draw(i).r1 + s.draw(i).r2;
  mean /= 40000.0;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
}
