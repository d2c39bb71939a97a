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

#include "nmqaoa/nonmarkov.hpp"

#include <cmath>
#include <limits>

#include "nmqaoa/error.hpp"
#include "nmqaoa/parallel.hpp"
#include "nmqaoa/philox.hpp"

namespace nmqaoa {

namespace {

ComplexMatrix product_state(int n_qubits, bool minus) {
  const Index dim = Index{1} << n_qubits;
  StateVector v(dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Index s = 0; s < dim; ++s) {
    const int parity = __builtin_popcountll(static_cast<unsigned long long>(s)) & 1;
    v(s) = (minus && parity) ? -amp : amp;
  }
  return v * v.adjoint();
}

struct Sampled {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  ComplexMatrix final_rho_p;
};

Sampled sample_run(const OpenSystem& sys, const ComplexMatrix& rho_p0, const ControlSchedule& schedule,
                   const ComplexMatrix& h, const ComplexMatrix& h_mix, double grid_dt, const SolverConfig& cfg) {
  Sampled s;
  SamplingOptions opt;
  opt.grid_dt = grid_dt;
  opt.observer = [&](double t, const RowMatrix& rho) {
    s.times.push_back(t);
    s.states.push_back(partial_trace_ancilla(rho, sys.dim_p, sys.dim_a));
  };
  s.final_rho_p = evolve_piecewise(sys.initial_state(rho_p0), schedule, h, h_mix, sys, cfg, opt).rho_p;
  return s;
}

OpenSystem build_system(const std::vector<LorentzianMode>& modes, int n_qubits) {
  return AugmentedModel(n_qubits, modes).system();
}

}  // namespace

DistanceTrace distance_trace(const OpenSystem& sys, const ControlSchedule& schedule, const ComplexMatrix& h,
                             const ComplexMatrix& h_mix, double grid_dt, const SolverConfig& cfg) {
  if (!(grid_dt > 0.0)) throw InvalidArgument("distance_trace: grid_dt must be > 0");
  const Sampled plus = sample_run(sys, product_state(sys.n_qubits, false), schedule, h, h_mix, grid_dt, cfg);
  const Sampled minus = sample_run(sys, product_state(sys.n_qubits, true), schedule, h, h_mix, grid_dt, cfg);
  DistanceTrace tr;
  tr.times = plus.times;
  tr.distances.reserve(plus.states.size());
  for (std::size_t i = 0; i < plus.states.size(); ++i) {
    tr.distances.push_back(trace_distance(plus.states[i], minus.states[i]));
  }
  tr.final_rho_plus = plus.final_rho_p;
  return tr;
}

double blp_measure(const DistanceTrace& trace) {
  if (trace.distances.empty()) throw InvalidArgument("blp_measure: empty trace");
  double n = 0.0;
  for (std::size_t i = 1; i < trace.distances.size(); ++i) {
    const double d = trace.distances[i] - trace.distances[i - 1];
    if (d > kFlatTolerance) n += d;
  }
  return n;
}

NonMarkovReport exploration_rate(const DistanceTrace& trace, IncreaseTime mode) {
  if (trace.distances.empty()) throw InvalidArgument("exploration_rate: empty trace");
  if (trace.times.size() != trace.distances.size()) throw InvalidArgument("exploration_rate: size mismatch");
  NonMarkovReport r;
  r.n_phi = blp_measure(trace);
  for (std::size_t i = 1; i < trace.distances.size(); ++i) {
    const double d = trace.distances[i] - trace.distances[i - 1];
    const double dt = trace.times[i] - trace.times[i - 1];
    if (d > kFlatTolerance) {
      r.t_e += dt;
    } else if (mode == IncreaseTime::Literal && std::abs(d) <= kFlatTolerance) {
      r.t_e += 0.5 * dt;
    }
  }
  r.sigma_bar = r.t_e > 0.0 ? r.n_phi / r.t_e : 0.0;
  return r;
}

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "omega_a") return SweepParam::OmegaA;
  if (name == "kappa") return SweepParam::Kappa;
  if (name == "gamma") return SweepParam::Gamma;
  throw ConfigError("sweep: param must be one of omega_a, kappa, gamma (got '" + name + "')");
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::OmegaA:
      return "omega_a";
    case SweepParam::Kappa:
      return "kappa";
    case SweepParam::Gamma:
      return "gamma";
  }
  return "";
}

std::vector<SweepPoint> sweep_parameter(const SweepBase& base, SweepParam param,
                                        const std::vector<double>& values, int workers) {
  if (values.empty()) throw InvalidArgument("sweep: values must be nonempty");
  if (base.modes.empty()) throw InvalidArgument("sweep: at least one mode is required");
  const int n = base.graph.n_nodes();
  const ComplexMatrix h = build_cost_hamiltonian(base.graph);
  const ComplexMatrix h_mix = build_mixer(n);
  const CutExtrema ext = brute_force_extrema(base.graph);
  std::vector<SweepPoint> out(values.size());

  parallel_for(values.size(), workers, [&](std::size_t k) {
    std::vector<LorentzianMode> modes = base.modes;
    switch (param) {
      case SweepParam::OmegaA:
        modes[0].omega_a = values[k];
        break;
      case SweepParam::Kappa:
        modes[0].kappa = values[k];
        break;
      case SweepParam::Gamma:
        modes[0].gamma = values[k];
        break;
    }
    const OpenSystem sys = build_system(modes, n);
    SweepPoint p;
    p.value = values[k];
    const DistanceTrace tr = distance_trace(sys, base.schedule, h, h_mix, base.grid_dt, base.solver);
    const NonMarkovReport rep = exploration_rate(tr);
    p.n_phi_initial = rep.n_phi;
    p.sigma_bar = rep.sigma_bar;
    p.r_initial = approximation_ratio(h, tr.final_rho_plus, ext);
    p.n_phi_optimized = std::numeric_limits<double>::quiet_NaN();
    p.r_optimized = std::numeric_limits<double>::quiet_NaN();
    if (base.optimizer) {
      SolverConfig inner = base.solver;
      if (base.optimizer_dt) inner.dt = *base.optimizer_dt;
      const MasterEvaluator ev(sys, h, h_mix, inner);
      const OptimizationResult opt = optimize(base.schedule, *base.optimizer, ev, 1);
      const DistanceTrace tro = distance_trace(sys, opt.best, h, h_mix, base.grid_dt, base.solver);
      p.n_phi_optimized = blp_measure(tro);
      p.r_optimized = approximation_ratio(h, tro.final_rho_plus, ext);
    }
    out[k] = p;
  });
  return out;
}

std::vector<ExplorePoint> explore_scatter(const WeightedGraph& graph, const std::vector<LorentzianMode>& modes,
                                          int n_samples, double lo, double hi, std::uint64_t seed,
                                          const SolverConfig& solver, double grid_dt, int workers) {
  if (n_samples < 1) throw InvalidArgument("explore: n_samples must be >= 1");
  if (!(hi >= lo) || lo < 0.0) throw InvalidArgument("explore: need 0 <= lo <= hi");
  const int n = graph.n_nodes();
  const ComplexMatrix h = build_cost_hamiltonian(graph);
  const ComplexMatrix h_mix = build_mixer(n);
  const CutExtrema ext = brute_force_extrema(graph);
  const OpenSystem sys = build_system(modes, n);
  const CounterStream rng(seed);

  std::vector<ExplorePoint> out(static_cast<std::size_t>(n_samples));
  for (std::size_t s = 0; s < out.size(); ++s) {
    const auto a = rng.draw(2 * s);
    const auto b = rng.draw(2 * s + 1);
    for (double u : {a.r1, a.r2, b.r1, b.r2}) out[s].tau.push_back(lo + (hi - lo) * u);
  }
  parallel_for(out.size(), workers, [&](std::size_t s) {
    const DistanceTrace tr = distance_trace(sys, ControlSchedule(out[s].tau), h, h_mix, grid_dt, solver);
    const NonMarkovReport rep = exploration_rate(tr);
    out[s].sigma_bar = rep.sigma_bar;
    out[s].n_phi = rep.n_phi;
    out[s].t_e = rep.t_e;
    out[s].r = approximation_ratio(h, tr.final_rho_plus, ext);
  });
  return out;
}

}  // namespace nmqaoa
