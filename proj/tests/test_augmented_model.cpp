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
#include "nmqaoa/augmented_model.hpp"
#include "nmqaoa/error.hpp"

using namespace nmqaoa;

TEST_CASE("single-mode model") {
  const AugmentedModel m(4, {LorentzianMode{}});
  CHECK(m.dim() == 128);
  CHECK(m.dim_a() == 8);
  const ComplexMatrix ha = m.h_a_dense();
  // H_a = I_p (x) omega a^dag a
  for (Index k = 0; k < 8; ++k) CHECK(ha(k, k).real() == doctest::Approx(10.0 * static_cast<double>(k)));
  CHECK(is_hermitian(ha));
  CHECK(is_hermitian(m.h_pa_dense(), 1e-12));
  REQUIRE(m.jumps().size() == 1);
  CHECK(m.jumps()[0].gamma == doctest::Approx(0.6));
  CHECK(m.h_pa_dense().cwiseAbs().maxCoeff() > 0.0);

  // the interaction exchanges single excitations between sigma_y and the mode
  const ComplexMatrix a = m.mode_annihilation(0);
  CHECK((a - annihilation(8)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interaction matches its defining form") {
  const LorentzianMode mode{10.0, 0.6, 1.0, 3};
  const AugmentedModel m(2, {mode});
  const ComplexMatrix a = kron(ComplexMatrix::Identity(4, 4), annihilation(3));
  const ComplexMatrix c = -std::sqrt(mode.gamma) / 2.0 * a;
  ComplexMatrix zy = embed_qubit_op(pauli::y(), 1, 2) + embed_qubit_op(pauli::y(), 2, 2);
  const ComplexMatrix z = std::sqrt(mode.kappa) * kron(zy, ComplexMatrix::Identity(3, 3));
  const ComplexMatrix expected = kI * (c.adjoint() * z - z.adjoint() * c);
  CHECK((m.h_pa_dense() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("decoupled limit") {
  const AugmentedModel m(3, {LorentzianMode{10.0, 0.6, 0.0, 4}});
  CHECK(m.h_pa_dense().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("double-mode model") {
  const AugmentedModel m(4, {LorentzianMode{10.0, 0.6, 1.0, 4}, LorentzianMode{5.0, 1.0, 0.8, 4}});
  CHECK(m.dim() == 16 * 16);
  CHECK(m.jumps().size() == 2);
  CHECK(m.jumps()[1].gamma == doctest::Approx(1.0));
  const AugmentedModel only1(4, {LorentzianMode{10.0, 0.6, 1.0, 4}, LorentzianMode{5.0, 1.0, 0.0, 4}});
  const AugmentedModel only2(4, {LorentzianMode{10.0, 0.6, 0.0, 4}, LorentzianMode{5.0, 1.0, 0.8, 4}});
  // two summands, one per mode
  CHECK((m.h_pa_dense() - only1.h_pa_dense() - only2.h_pa_dense()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(only1.h_pa_dense().cwiseAbs().maxCoeff() > 0.0);
  CHECK(only2.h_pa_dense().cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(AugmentedModel(0, {LorentzianMode{}}), InvalidArgument);
  CHECK_THROWS_AS(AugmentedModel(2, {}), InvalidArgument);
  CHECK_THROWS_AS(AugmentedModel(2, {LorentzianMode{10.0, 0.0, 1.0, 4}}), InvalidArgument);
  CHECK_THROWS_AS(AugmentedModel(2, {LorentzianMode{10.0, 0.6, -1.0, 4}}), InvalidArgument);
  CHECK_THROWS_AS(AugmentedModel(2, {LorentzianMode{10.0, 0.6, 1.0, 1}}), InvalidArgument);
  CHECK_THROWS_AS(AugmentedModel(13, {LorentzianMode{}}), InvalidArgument);
  CHECK_THROWS_AS(AugmentedModel(12, {LorentzianMode{10.0, 0.6, 1.0, 32}}), InvalidArgument);
}

TEST_CASE("spectrum and transfer function") {
  const LorentzianMode m{};
  CHECK(spectrum_value({m}, 10.0) == doctest::Approx(1.0));
  CHECK(spectrum_value({m}, 10.3) == doctest::Approx(0.5));
  CHECK(spectrum_value({m}, 9.7) == doctest::Approx(0.5));
  const std::vector<LorentzianMode> two{m, LorentzianMode{5.0, 1.0, 0.8, 4}};
  // kappa_1 = 1 weights the off-resonant tail of the first mode
  CHECK(spectrum_value(two, 5.0) == doctest::Approx(0.8 + 1.0 * 0.09 / (0.09 + 25.0)));
  CHECK(transfer_function_gain(m, 10.0) == doctest::Approx(1.0));
  CHECK(transfer_function_gain(m, 1e6) < 1e-9);
  const LorentzianMode k{7.0, 1.3, 2.5, 4};
  for (int i = 0; i < 50; ++i) {
    const double w = -20.0 + 0.8 * i;
    CHECK(spectrum_value({k}, w) / k.kappa == doctest::Approx(transfer_function_gain(k, w)).epsilon(1e-12));
  }
}

TEST_CASE("open system helpers") {
  const OpenSystem sys = AugmentedModel(2, {LorentzianMode{10.0, 0.6, 1.0, 3}}).system();
  CHECK(sys.dim() == 12);
  ComplexMatrix rho_p = ComplexMatrix::Identity(4, 4) / 4.0;
  const ComplexMatrix rho = sys.initial_state(rho_p);
  CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-15);
  CHECK((partial_trace_ancilla(rho, 4, 3) - rho_p).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(sys.top_level_projectors.size() == 1);

  const OpenSystem mk = markovian_system(3, 1.0);
  CHECK(mk.dim_a == 1);
  CHECK(mk.jumps.size() == 3);
  CHECK(closed_system(3).jumps.empty());
}

TEST_CASE("mode json") {
  const LorentzianMode m{5.0, 1.0, 0.8, 4};
  CHECK(LorentzianMode::from_json(m.to_json()) == m);
  CHECK_THROWS_AS(LorentzianMode::from_json(nlohmann::json::parse(R"({"omega": 1})")), ConfigError);
  CHECK_THROWS_AS(LorentzianMode::from_json(nlohmann::json::parse(R"({"gamma": -1})")), ConfigError);
}
