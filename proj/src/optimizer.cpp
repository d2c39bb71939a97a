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

#include "nmqaoa/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "nmqaoa/error.hpp"
#include "nmqaoa/parallel.hpp"

namespace nmqaoa {

void OptimizerConfig::validate() const {
  if (!(xi >= 0.0)) throw InvalidArgument("optimizer: xi must be >= 0");
  if (!(upsilon > 0.0)) throw InvalidArgument("optimizer: upsilon must be > 0");
  if (!(eta > 0.0)) throw InvalidArgument("optimizer: eta must be > 0");
  if (!(epsilon > 0.0)) throw InvalidArgument("optimizer: epsilon must be > 0");
  if (max_iters < 0) throw InvalidArgument("optimizer: max_iters must be >= 0");
}

MasterEvaluator::MasterEvaluator(OpenSystem sys, ComplexMatrix h, ComplexMatrix h_mix, SolverConfig cfg)
    : sys_(std::move(sys)), h_(std::move(h)), h_mix_(std::move(h_mix)), cfg_(cfg) {
  rho0_ = sys_.initial_state(uniform_superposition(sys_.n_qubits));
}

Evaluation MasterEvaluator::evaluate(const ControlSchedule& schedule) const {
  Evaluation e;
  e.rho_p = evolve_piecewise(rho0_, schedule, h_, h_mix_, sys_, cfg_).rho_p;
  e.h = (h_ * e.rho_p).trace().real();
  return e;
}

TrajectoryEvaluator::TrajectoryEvaluator(OpenSystem sys, ComplexMatrix h, ComplexMatrix h_mix,
                                         TrajectoryConfig cfg, int workers, Accumulate kind)
    : sys_(std::move(sys)), h_(std::move(h)), h_mix_(std::move(h_mix)), cfg_(cfg), workers_(workers),
      kind_(kind) {
  if (kind_ == Accumulate::Full) throw InvalidArgument("trajectory evaluator: use Principal or Diagonal");
  phi0_ = sys_.initial_vector(plus_state(sys_.n_qubits));
}

Evaluation TrajectoryEvaluator::evaluate(const ControlSchedule& schedule) const {
  const TrajectoryEnsembleResult r = run_ensemble(phi0_, schedule, h_, h_mix_, sys_, cfg_, workers_, kind_);
  Evaluation e;
  e.diagonal = kind_ == Accumulate::Diagonal;
  e.rho_p = r.rho;
  if (e.diagonal) {
    e.h = (h_.diagonal().array() * e.rho_p.col(0).array()).sum().real();
  } else {
    e.h = (h_ * e.rho_p).trace().real();
  }
  return e;
}

ObjectiveValue objective(const ControlSchedule& schedule, const Evaluator& evaluator, double xi) {
  const double h = evaluator.evaluate(schedule).h;
  return {h, h + xi * schedule.l1_norm()};
}

std::vector<double> soft_threshold(const std::vector<double>& d, double threshold, bool clamp) {
  if (threshold < 0.0) throw InvalidArgument("soft_threshold: threshold must be >= 0");
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    double v;
    if (d[i] > threshold) {
      v = d[i] - threshold;
    } else if (d[i] < -threshold) {
      v = d[i] + threshold;
    } else {
      v = 0.0;
    }
    if (clamp && v < 0.0) v = 0.0;
    out[i] = v;
  }
  return out;
}

std::vector<double> finite_diff_gradient(const ControlSchedule& schedule, const Evaluator& evaluator,
                                         double epsilon, int workers, const double* h_at_tau) {
  if (!(epsilon > 0.0)) throw InvalidArgument("finite_diff_gradient: epsilon must be > 0");
  const std::vector<double>& tau = schedule.tau();
  const std::size_t n = tau.size();

  // Points to evaluate: (component, +1 | -1), plus the base point if any forward difference is used.
  struct Point {
    std::size_t component;
    int sign;
  };
  std::vector<Point> points;
  bool need_base = false;
  for (std::size_t i = 0; i < n; ++i) {
    points.push_back({i, +1});
    if (tau[i] - epsilon < 0.0) {
      need_base = true;
    } else {
      points.push_back({i, -1});
    }
  }
  const bool eval_base = need_base && h_at_tau == nullptr;
  std::vector<double> values(points.size() + (eval_base ? 1 : 0), 0.0);
  parallel_for(values.size(), workers, [&](std::size_t k) {
    if (k == points.size()) {
      values[k] = evaluator.evaluate(schedule).h;
      return;
    }
    std::vector<double> t = tau;
    t[points[k].component] += points[k].sign * epsilon;
    values[k] = evaluator.evaluate(ControlSchedule(t)).h;
  });
  const double base = need_base ? (eval_base ? values.back() : *h_at_tau) : 0.0;

  std::vector<double> grad(n, 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double plus = values[k++];
    if (tau[i] - epsilon < 0.0) {
      grad[i] = (plus - base) / epsilon;
    } else {
      const double minus = values[k++];
      grad[i] = (plus - minus) / (2.0 * epsilon);
    }
  }
  return grad;
}

OptimizationResult optimize(const ControlSchedule& schedule0, const OptimizerConfig& cfg,
                            const Evaluator& evaluator, int workers) {
  cfg.validate();
  if (schedule0.size() == 0) throw InvalidArgument("optimize: initial schedule is empty");
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  auto check = [](double h, int iteration) {
    if (!std::isfinite(h)) {
      std::ostringstream msg;
      msg << "non-finite objective at iteration " << iteration;
      throw SolverError(msg.str());
    }
  };

  OptimizationResult res;
  ControlSchedule tau = schedule0;
  Evaluation ev = evaluator.evaluate(tau);
  check(ev.h, 0);
  double h_prev = ev.h;
  auto record = [&](int it, const ControlSchedule& s, const Evaluation& e) {
    const double y = e.h + cfg.xi * s.l1_norm();
    res.trace.records.push_back({it, s.tau(), e.h, y, s.effective_depth(), elapsed()});
    if (res.trace.records.size() == 1 || y < res.best_value.y) {
      res.best = s;
      res.best_value = {e.h, y};
      res.best_evaluation = e;
    }
  };
  record(0, tau, ev);

  for (int it = 1; it <= cfg.max_iters; ++it) {
    const std::vector<double> grad = finite_diff_gradient(tau, evaluator, cfg.epsilon, workers, &h_prev);
    std::vector<double> d = tau.tau();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= cfg.upsilon * grad[i];
    tau = ControlSchedule(soft_threshold(d, cfg.xi * cfg.upsilon));
    ev = evaluator.evaluate(tau);
    check(ev.h, it);
    record(it, tau, ev);
    const double change = std::abs(ev.h - h_prev);
    h_prev = ev.h;
    if (change < cfg.eta) {
      res.trace.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace nmqaoa
