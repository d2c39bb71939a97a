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

#include "nmqaoa/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nmqaoa/error.hpp"

namespace nmqaoa {

namespace {

double row_sum_norm(const SparseOperator& s) {
  double best = 0.0;
  for (Index i = 0; i < s.outerSize(); ++i) {
    double r = 0.0;
    for (SparseOperator::InnerIterator it(s, i); it; ++it) r += std::abs(it.value());
    best = std::max(best, r);
  }
  return best;
}

double col_sum_norm(const SparseOperator& s) { return row_sum_norm(SparseOperator(s.transpose())); }

double top_population(const RowMatrix& rho, const std::vector<SparseOperator>& projectors) {
  double worst = 0.0;
  for (const auto& p : projectors) {
    double pop = 0.0;
    for (Index i = 0; i < p.outerSize(); ++i) {
      for (SparseOperator::InnerIterator it(p, i); it; ++it) {
        pop += (it.value() * rho(it.col(), it.row())).real();
      }
    }
    worst = std::max(worst, pop);
  }
  return worst;
}

}  // namespace

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h_total,
                           const std::vector<DenseJump>& jumps) {
  if (rho.rows() != rho.cols() || h_total.rows() != rho.rows() || h_total.cols() != rho.cols()) {
    throw InvalidArgument("lindblad_rhs: dimension mismatch");
  }
  ComplexMatrix out = -kI * (h_total * rho - rho * h_total);
  for (const auto& j : jumps) {
    if (j.op.rows() != rho.rows() || j.op.cols() != rho.cols()) {
      throw InvalidArgument("lindblad_rhs: jump operator dimension mismatch");
    }
    const ComplexMatrix ldl = j.op.adjoint() * j.op;
    out += j.gamma * (j.op * rho * j.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("solver: dt must be > 0");
}

LindbladGenerator::LindbladGenerator(const OpenSystem& sys, const ComplexMatrix& h_p)
    : jumps_(sys.jumps) {
  compile(SparseOperator(sys.lift(h_p) + sys.h_static));
}

LindbladGenerator::LindbladGenerator(const SparseOperator& h_total, std::vector<JumpOperator> jumps)
    : jumps_(std::move(jumps)) {
  compile(h_total);
}

void LindbladGenerator::compile(const SparseOperator& h_total) {
  if (h_total.rows() != h_total.cols()) throw InvalidArgument("generator: Hamiltonian is not square");
  h_eff_ = h_total;
  double jump_bound = 0.0;
  for (const auto& j : jumps_) {
    if (j.op.rows() != h_total.rows() || j.op.cols() != h_total.cols()) {
      throw InvalidArgument("generator: jump operator dimension mismatch");
    }
    if (j.gamma < 0.0) throw InvalidArgument("generator: negative rate");
    const SparseOperator ldl = SparseOperator(j.op.adjoint()) * j.op;
    h_eff_ -= SparseOperator(Complex(0.0, 0.5 * j.gamma) * ldl);
    jump_bound += j.gamma * row_sum_norm(j.op) * col_sum_norm(j.op);
  }
  h_eff_.prune(Complex(0.0, 0.0));
  h_eff_.makeCompressed();
  bound_ = 2.0 * row_sum_norm(h_eff_) + jump_bound;
}

void LindbladGenerator::apply(const RowMatrix& rho, RowMatrix& out, RowMatrix& a, RowMatrix& m) const {
  // The generator maps Hermitian rho to Hermitian output, so -i H_e rho + i rho H_e^dag = B + B^dag.
  a.noalias() = h_eff_ * rho;
  a *= -kI;
  out = a + a.adjoint();
  for (const auto& j : jumps_) {
    if (j.gamma == 0.0) continue;
    m.noalias() = j.op * rho;
    a.noalias() = j.op * m.adjoint();  // L (L rho)^dag = L rho L^dag for Hermitian rho
    out += j.gamma * a;
  }
}

Rk4Integrator::Rk4Integrator(Index dim)
    : acc_(dim, dim), stage_(dim, dim), k_(dim, dim), a_(dim, dim), m_(dim, dim) {}

void Rk4Integrator::step(RowMatrix& rho, const LindbladGenerator& g, double dt) {
  g.apply(rho, k_, a_, m_);
  acc_ = rho + (dt / 6.0) * k_;
  stage_ = rho + (dt / 2.0) * k_;
  g.apply(stage_, k_, a_, m_);
  acc_ += (dt / 3.0) * k_;
  stage_ = rho + (dt / 2.0) * k_;
  g.apply(stage_, k_, a_, m_);
  acc_ += (dt / 3.0) * k_;
  stage_ = rho + dt * k_;
  g.apply(stage_, k_, a_, m_);
  rho = acc_ + (dt / 6.0) * k_;
}

void Rk4Integrator::advance(RowMatrix& rho, const LindbladGenerator& g, double duration, double dt) {
  double remaining = duration;
  while (remaining > 0.0) {
    double h = std::min(dt, remaining);
    if (remaining - h < 1e-9 * dt) h = remaining;
    step(rho, g, h);
    remaining -= h;
  }
}

void check_step_size(const LindbladGenerator& g, double dt) {
  if (dt * g.spectral_bound() > Rk4Integrator::kStabilityLimit) {
    std::ostringstream msg;
    msg << "dt = " << dt << " ns is outside the RK4 stability region (generator bound "
        << g.spectral_bound() << " 1/ns; need dt <= "
        << Rk4Integrator::kStabilityLimit / g.spectral_bound() << ")";
    throw SolverError(msg.str());
  }
}

ComplexMatrix evolve_segment(const ComplexMatrix& rho, const ComplexMatrix& h_p, const OpenSystem& sys,
                             double duration, const SolverConfig& cfg) {
  cfg.validate();
  if (duration < 0.0) throw InvalidArgument("evolve_segment: negative duration");
  if (rho.rows() != sys.dim() || rho.cols() != sys.dim()) {
    throw InvalidArgument("evolve_segment: state dimension mismatch");
  }
  if (duration == 0.0) return rho;
  const LindbladGenerator g(sys, h_p);
  check_step_size(g, cfg.dt);
  RowMatrix state = rho;
  Rk4Integrator rk(sys.dim());
  rk.advance(state, g, duration, cfg.dt);
  return ComplexMatrix(state);
}

PiecewiseResult evolve_piecewise(const ComplexMatrix& rho0, const ControlSchedule& schedule,
                                 const ComplexMatrix& h, const ComplexMatrix& h_mix,
                                 const OpenSystem& sys, const SolverConfig& cfg,
                                 const SamplingOptions& sampling) {
  cfg.validate();
  if (schedule.size() == 0) throw InvalidArgument("evolve_piecewise: schedule is empty");
  if (rho0.rows() != sys.dim() || rho0.cols() != sys.dim()) {
    throw InvalidArgument("evolve_piecewise: state dimension mismatch");
  }
  const LindbladGenerator cost(sys, h);
  const LindbladGenerator mixer(sys, h_mix);
  check_step_size(cost, cfg.dt);
  check_step_size(mixer, cfg.dt);

  PiecewiseResult res;
  RowMatrix state = rho0;
  Rk4Integrator rk(sys.dim());
  const bool sample = sampling.grid_dt > 0.0 && sampling.observer;
  double t = 0.0;
  if (sample) sampling.observer(t, state);
  res.max_top_population = top_population(state, sys.top_level_projectors);

  auto run = [&](const LindbladGenerator& g, double duration) {
    if (duration <= 0.0) return;
    if (!sample) {
      rk.advance(state, g, duration, cfg.dt);
      t += duration;
    } else {
      double remaining = duration;
      while (remaining > 0.0) {
        double chunk = std::min(sampling.grid_dt, remaining);
        if (remaining - chunk < 1e-9 * sampling.grid_dt) chunk = remaining;
        rk.advance(state, g, chunk, cfg.dt);
        remaining -= chunk;
        t += chunk;
        sampling.observer(t, state);
      }
    }
    res.max_top_population =
        std::max(res.max_top_population, top_population(state, sys.top_level_projectors));
  };

  for (int j = 0; j < schedule.depth(); ++j) {
    run(cost, schedule.zeta(j));
    run(mixer, schedule.beta(j));
  }
  res.rho_p = partial_trace_ancilla(state, sys.dim_p, sys.dim_a);
  res.rho = ComplexMatrix(state);
  return res;
}

ComplexMatrix evolve_markovian(const ComplexMatrix& rho_p0, const ControlSchedule& schedule,
                               const ComplexMatrix& h, const ComplexMatrix& h_mix,
                               const std::vector<DenseJump>& rates, const SolverConfig& cfg) {
  OpenSystem sys;
  sys.dim_p = rho_p0.rows();
  sys.dim_a = 1;
  int n = 0;
  while ((Index{1} << n) < sys.dim_p) ++n;
  sys.n_qubits = n;
  sys.h_static = SparseOperator(sys.dim_p, sys.dim_p);
  for (const auto& r : rates) sys.jumps.push_back({to_sparse(r.op), r.gamma});
  return evolve_piecewise(rho_p0, schedule, h, h_mix, sys, cfg).rho_p;
}

StateVector plus_state(int n_qubits) {
  const Index dim = Index{1} << n_qubits;
  return StateVector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
}

ComplexMatrix uniform_superposition(int n_qubits) {
  const StateVector v = plus_state(n_qubits);
  return v * v.adjoint();
}

std::size_t sparse_bytes(const SparseOperator& s) {
  return static_cast<std::size_t>(s.nonZeros()) * (sizeof(Complex) + sizeof(SparseOperator::StorageIndex)) +
         static_cast<std::size_t>(s.outerSize() + 1) * sizeof(SparseOperator::StorageIndex);
}

std::size_t projected_master_bytes(Index dim, std::size_t sparse) {
  // Caller's input, the integrated state, the work buffers and the returned matrix.
  const std::size_t dense = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim) * sizeof(Complex);
  return (3 + Rk4Integrator::kWorkBuffers) * dense + sparse;
}

}  // namespace nmqaoa
