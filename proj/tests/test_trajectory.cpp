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

#include "doctest.h"
#include "nmqaoa/error.hpp"
#include "nmqaoa/maxcut.hpp"
#include "nmqaoa/trajectory.hpp"

using namespace nmqaoa;

namespace {

std::vector<DenseJump> dense_jumps(const OpenSystem& sys) {
  std::vector<DenseJump> out;
  for (const auto& j : sys.jumps) out.push_back({ComplexMatrix(j.op), j.gamma});
  return out;
}

}  // namespace

TEST_CASE("effective Hamiltonian") {
  const ComplexMatrix h = pauli::x();
  CHECK((effective_hamiltonian(h, {}) - h).cwiseAbs().maxCoeff() == 0.0);

  const AugmentedModel m(1, {LorentzianMode{10.0, 0.6, 1.0, 4}});
  const OpenSystem sys = m.system();
  const ComplexMatrix h_total(sys.h_static);
  const ComplexMatrix h_e = effective_hamiltonian(h_total, dense_jumps(sys));
  // anti-Hermitian part carries the damping gamma a^dag a: eigenvalues 0, gamma, 2 gamma, ...
  const ComplexMatrix damp = (h_e - h_e.adjoint()) / Complex(0.0, -1.0);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(damp);
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double v = es.eigenvalues()(k) / 0.6;
    CHECK(std::abs(v - std::round(v)) < 1e-12);
  }
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(3 * 0.6));
}

TEST_CASE("single step rules") {
  const OpenSystem sys = AugmentedModel(1, {LorentzianMode{10.0, 0.6, 1.0, 3}}).system();
  const std::vector<DenseJump> jumps = dense_jumps(sys);
  const ComplexMatrix h_e = effective_hamiltonian(ComplexMatrix(sys.h_static), jumps);

  // vacuum ancilla: the lowering operator cannot fire
  const StateVector vac = sys.initial_vector(plus_state(1));
  int fired = 7;
  const StateVector next = trajectory_step(vac, h_e, jumps, 1e-3, 0.0, 0.5, &fired);
  CHECK(fired == -1);
  CHECK(next.norm() == doctest::Approx(1.0));

  // one excitation: a jump returns the ancilla to vacuum and leaves the principal factor alone
  StateVector one = StateVector::Zero(sys.dim());
  one(0 * 3 + 1) = 0.6;
  one(1 * 3 + 1) = 0.8;
  const StateVector after = trajectory_step(one, h_e, jumps, 0.01, 0.0, 0.5, &fired);
  CHECK(fired == 0);
  CHECK(std::abs(after(0) - Complex(0.6)) < 1e-12);
  CHECK(std::abs(after(3) - Complex(0.8)) < 1e-12);

  // first-order probability guard
  CHECK_THROWS_AS(trajectory_step(one, h_e, jumps, 1.0, 0.0, 0.5), StepSizeError);
}

TEST_CASE("channel selection") {
  CHECK(select_channel({0.01, 0.02}, 0.5) == 1);
  CHECK(select_channel({0.02, 0.01}, 0.5) == 0);
  CHECK(select_channel({0.02, 0.01}, 0.9) == 1);
  CHECK(select_channel({0.01, 0.01}, 0.4) == 0);  // ties keep index order
  CHECK(select_channel({0.0, 0.03}, 0.0) == 1);
  CHECK_THROWS_AS(select_channel({}, 0.5), InvalidArgument);
}

TEST_CASE("sparse propagator agrees with dense") {
  const AugmentedModel m(6, {LorentzianMode{10.0, 0.6, 1.0, 8}});  // dim 512, sparse branch
  const OpenSystem sys = m.system();
  const ComplexMatrix h = build_cost_hamiltonian(fixtures::table_prefix(6));
  const SparseOperator h_e = SparseOperator(sys.lift(h) + sys.h_static) -
                             SparseOperator(Complex(0.0, 0.3) * SparseOperator(SparseOperator(sys.jumps[0].op.adjoint()) *
                                                                               sys.jumps[0].op));
  const NonHermitianPropagator p(h_e, 0.01);
  CHECK_FALSE(p.dense());
  StateVector in = StateVector::Random(sys.dim());
  in.normalize();
  StateVector out, s1, s2;
  p.apply(in, out, s1, s2);
  const StateVector ref = expm_propagator(ComplexMatrix(h_e), 0.01) * in;
  CHECK((out - ref).norm() < 1e-12);
}

TEST_CASE("trajectory determinism and closed limit") {
  const ComplexMatrix h = build_cost_hamiltonian(fixtures::four_node());
  const ComplexMatrix h_mix = build_mixer(4);
  const ControlSchedule s({0.3, 0.2, 0.25, 0.15});
  const OpenSystem sys = AugmentedModel(4, {LorentzianMode{10.0, 0.6, 1.0, 4}}).system();
  const StateVector phi0 = sys.initial_vector(plus_state(4));
  const auto a = run_trajectory(phi0, s, h, h_mix, sys, 1e-3, 99);
  const auto b = run_trajectory(phi0, s, h, h_mix, sys, 1e-3, 99);
  CHECK((a.phi - b.phi).norm() == 0.0);
  CHECK(a.jumps == b.jumps);

  const OpenSystem free = AugmentedModel(4, {LorentzianMode{10.0, 0.6, 0.0, 4}}).system();
  const StateVector f0 = free.initial_vector(plus_state(4));
  const auto c = run_trajectory(f0, s, h, h_mix, free, 1e-3, 1);
  const auto d = run_trajectory(f0, s, h, h_mix, free, 1e-3, 2);
  CHECK(c.jumps == 0);
  CHECK((c.phi - d.phi).norm() < 1e-14);
  StateVector expect = plus_state(4);
  for (int j = 0; j < 2; ++j) {
    expect = expm_propagator(h, s.zeta(j)) * expect;
    expect = expm_propagator(h_mix, s.beta(j)) * expect;
  }
  CHECK((free.initial_vector(expect) - c.phi).norm() < 1e-10);
}

TEST_CASE("ensemble average") {
  StateVector v(2);
  v << 0.6, 0.8;
  const auto same = ensemble_average({v, v, v});
  CHECK((same.rho - v * v.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  StateVector e0 = StateVector::Zero(2), e1 = StateVector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  const auto mixed = ensemble_average({e0, e1});
  CHECK((mixed.rho - 0.5 * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("ensemble reduction does not depend on the worker count") {
  const ComplexMatrix h = build_cost_hamiltonian(fixtures::four_node());
  const ComplexMatrix h_mix = build_mixer(4);
  const ControlSchedule s({0.3, 0.2});
  const OpenSystem sys = AugmentedModel(4, {LorentzianMode{10.0, 0.6, 1.0, 4}}).system();
  const StateVector phi0 = sys.initial_vector(plus_state(4));
  TrajectoryConfig cfg;
  cfg.n_traj = 37;
  const auto one = run_ensemble(phi0, s, h, h_mix, sys, cfg, 1, Accumulate::Principal, &h);
  const auto four = run_ensemble(phi0, s, h, h_mix, sys, cfg, 4, Accumulate::Principal, &h);
  CHECK((one.rho - four.rho).cwiseAbs().maxCoeff() == 0.0);
  CHECK(one.std_err_estimate == four.std_err_estimate);
  CHECK(std::abs(one.rho.trace() - Complex(1.0)) < 1e-12);
  CHECK(one.per_traj[5].seed == (cfg.base_seed ^ 5u));

  const auto diag = run_ensemble(phi0, s, h, h_mix, sys, cfg, 2, Accumulate::Diagonal);
  CHECK(diag.rho.cols() == 1);
  CHECK((diag.rho.col(0) - one.rho.diagonal()).cwiseAbs().maxCoeff() < 1e-13);
  const auto full = run_ensemble(phi0, s, h, h_mix, sys, cfg, 3, Accumulate::Full);
  CHECK((partial_trace_ancilla(full.rho, 16, 4) - one.rho).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("trajectory config validation") {
  TrajectoryConfig c;
  c.n_traj = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.n_traj = 1;
  c.dt = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}
