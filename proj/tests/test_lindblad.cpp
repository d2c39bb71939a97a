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
#include <random>

#include "doctest.h"
#include "nmqaoa/error.hpp"
#include "nmqaoa/lindblad.hpp"
#include "nmqaoa/maxcut.hpp"

using namespace nmqaoa;

namespace {

ComplexMatrix projector(Index dim, Index k) {
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  p(k, k) = 1.0;
  return p;
}

ComplexMatrix closed_product(const ControlSchedule& s, const ComplexMatrix& h, const ComplexMatrix& h_mix,
                             const ComplexMatrix& rho0) {
  ComplexMatrix rho = rho0;
  for (int j = 0; j < s.depth(); ++j) {
    if (s.zeta(j) > 0) {
      const ComplexMatrix u = expm_propagator(h, s.zeta(j));
      rho = u * rho * u.adjoint();
    }
    if (s.beta(j) > 0) {
      const ComplexMatrix u = expm_propagator(h_mix, s.beta(j));
      rho = u * rho * u.adjoint();
    }
  }
  return rho;
}

}  // namespace

TEST_CASE("reference generator") {
  // pure decay of |1> with sigma_minus = |0><1|
  ComplexMatrix sm = ComplexMatrix::Zero(2, 2);
  sm(0, 1) = 1.0;
  const ComplexMatrix r = lindblad_rhs(projector(2, 1), ComplexMatrix::Zero(2, 2), {{sm, 1.0}});
  CHECK((r - (projector(2, 0) - projector(2, 1))).cwiseAbs().maxCoeff() < 1e-15);

  const ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
  const ComplexMatrix p = lindblad_rhs(plus, pauli::z(), {});
  CHECK(std::abs(p(0, 1) - Complex(0, -1.0)) < 1e-15);
  CHECK(std::abs(p(1, 0) - Complex(0, 1.0)) < 1e-15);

  ComplexMatrix g = ComplexMatrix::Random(4, 4);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  ComplexMatrix hh = ComplexMatrix::Random(4, 4);
  hh = hh + hh.adjoint();
  const ComplexMatrix out = lindblad_rhs(rho, hh, {{ComplexMatrix::Random(4, 4), 0.3}});
  CHECK(std::abs(out.trace()) < 1e-13);
}

TEST_CASE("sparse generator agrees with the reference") {
  const AugmentedModel m(2, {LorentzianMode{3.0, 0.6, 1.0, 3}});
  const OpenSystem sys = m.system();
  const ComplexMatrix h_p = build_cost_hamiltonian(WeightedGraph(2, {{1, 2, 0.4}}));
  const LindbladGenerator gen(sys, h_p);
  ComplexMatrix g = ComplexMatrix::Random(sys.dim(), sys.dim());
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  const ComplexMatrix h_total = ComplexMatrix(sys.lift(h_p)) + ComplexMatrix(sys.h_static);
  std::vector<DenseJump> dj;
  for (const auto& j : sys.jumps) dj.push_back({ComplexMatrix(j.op), j.gamma});
  const ComplexMatrix ref = lindblad_rhs(rho, h_total, dj);
  RowMatrix in = rho, out(sys.dim(), sys.dim()), a(sys.dim(), sys.dim()), s(sys.dim(), sys.dim());
  gen.apply(in, out, a, s);
  CHECK((ComplexMatrix(out) - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("segment evolution") {
  const OpenSystem sys = AugmentedModel(2, {LorentzianMode{10.0, 0.6, 1.0, 4}}).system();
  const ComplexMatrix h = build_cost_hamiltonian(WeightedGraph(2, {{1, 2, 0.7}}));
  const ComplexMatrix rho0 = sys.initial_state(uniform_superposition(2));
  CHECK((evolve_segment(rho0, h, sys, 0.0, {}) - rho0).cwiseAbs().maxCoeff() == 0.0);

  // closed-system limit: diagonal H, phases only
  const OpenSystem free = AugmentedModel(2, {LorentzianMode{10.0, 0.6, 0.0, 4}}).system();
  const ComplexMatrix r = evolve_segment(free.initial_state(uniform_superposition(2)), h, free, 0.8, {});
  const ComplexMatrix u = expm_propagator(h, 0.8);
  const ComplexMatrix expect = u * uniform_superposition(2) * u.adjoint();
  CHECK(trace_distance(partial_trace_ancilla(r, 4, 4), expect) < 1e-9);

  // fourth-order convergence: halving dt barely moves the result
  const ComplexMatrix a = evolve_segment(rho0, h, sys, 0.5, SolverConfig{2e-3});
  const ComplexMatrix b = evolve_segment(rho0, h, sys, 0.5, SolverConfig{1e-3});
  CHECK(trace_distance(a, b) < 1e-6);
  CHECK(std::abs(b.trace() - Complex(1.0)) < 1e-10);
  CHECK(is_hermitian(b, 1e-12));
}

TEST_CASE("step size guard") {
  const OpenSystem sys = AugmentedModel(2, {LorentzianMode{}}).system();
  const ComplexMatrix h = build_cost_hamiltonian(WeightedGraph(2, {{1, 2, 0.7}}));
  const ComplexMatrix rho0 = sys.initial_state(uniform_superposition(2));
  CHECK_THROWS_AS(evolve_segment(rho0, h, sys, 1.0, SolverConfig{0.5}), SolverError);
  CHECK_THROWS_AS(SolverConfig{0.0}.validate(), InvalidArgument);
}

TEST_CASE("piecewise evolution") {
  const WeightedGraph g = fixtures::four_node();
  const ComplexMatrix h = build_cost_hamiltonian(g);
  const ComplexMatrix h_mix = build_mixer(4);
  const OpenSystem sys = AugmentedModel(4, {LorentzianMode{}}).system();
  const ComplexMatrix rho0 = sys.initial_state(uniform_superposition(4));

  const PiecewiseResult zero = evolve_piecewise(rho0, ControlSchedule({0, 0, 0, 0}), h, h_mix, sys, {});
  CHECK((zero.rho_p - uniform_superposition(4)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(evolve_piecewise(rho0, ControlSchedule(), h, h_mix, sys, {}), InvalidArgument);

  // closed-system limit at depth 1 against the unitary product
  const OpenSystem free = closed_system(4);
  const ControlSchedule s1({0.7, 0.4});
  const PiecewiseResult c = evolve_piecewise(uniform_superposition(4), s1, h, h_mix, free, {});
  CHECK(trace_distance(c.rho_p, closed_product(s1, h, h_mix, uniform_superposition(4))) < 1e-8);

  // sampling visits the grid and the end point
  std::vector<double> times;
  SamplingOptions opt;
  opt.grid_dt = 0.1;
  opt.observer = [&](double t, const RowMatrix& rho) {
    times.push_back(t);
    CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-8);
  };
  const PiecewiseResult sampled = evolve_piecewise(rho0, ControlSchedule({0.3, 0.2}), h, h_mix, sys, {}, opt);
  REQUIRE(times.size() == 6);
  CHECK(times.front() == doctest::Approx(0.0));
  CHECK(times.back() == doctest::Approx(0.5));
  CHECK(sampled.max_top_population < 1e-6);
}

TEST_CASE("Markovian principal-space evolution") {
  const ComplexMatrix h = build_cost_hamiltonian(fixtures::four_node());
  const ComplexMatrix h_mix = build_mixer(4);
  const ControlSchedule s({0.6, 0.9});
  std::vector<DenseJump> none;
  for (int q = 1; q <= 4; ++q) none.push_back({embed_qubit_op(pauli::y(), q, 4), 0.0});
  const ComplexMatrix closed = evolve_markovian(uniform_superposition(4), s, h, h_mix, none, {});
  CHECK(trace_distance(closed, closed_product(s, h, h_mix, uniform_superposition(4))) < 1e-8);

  // unital sigma_y channels drive purity down monotonically
  std::vector<DenseJump> decay;
  for (int q = 1; q <= 4; ++q) decay.push_back({embed_qubit_op(pauli::y(), q, 4), 0.5});
  double last = 1.0;
  ComplexMatrix rho = uniform_superposition(4);
  for (int k = 0; k < 5; ++k) {
    rho = evolve_markovian(rho, ControlSchedule({0.1, 0.2}), h, h_mix, decay, {});
    const double purity = (rho * rho).trace().real();
    CHECK(purity <= last + 1e-12);
    last = purity;
  }
}

TEST_CASE("memory projection") {
  CHECK(projected_master_bytes(128, 0) == std::size_t{8} * 128 * 128 * 16);
  const SparseOperator id = sparse_identity(10);
  CHECK(sparse_bytes(id) > 0);
}
