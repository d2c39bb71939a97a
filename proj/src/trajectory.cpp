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

#include "nmqaoa/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>

#include "nmqaoa/error.hpp"
#include "nmqaoa/parallel.hpp"
#include "nmqaoa/philox.hpp"

namespace nmqaoa {

namespace {

using RowMap = Eigen::Map<const RowMatrix>;

double row_sum_norm(const SparseOperator& s) {
  double best = 0.0;
  for (Index i = 0; i < s.outerSize(); ++i) {
    double r = 0.0;
    for (SparseOperator::InnerIterator it(s, i); it; ++it) r += std::abs(it.value());
    best = std::max(best, r);
  }
  return best;
}

void check_jump_probability(double dp, double dt) {
  if (dp > kMaxJumpProbability) {
    std::ostringstream msg;
    msg << "jump probability " << dp << " exceeds " << kMaxJumpProbability << " at dt = " << dt
        << " ns; reduce dt";
    throw StepSizeError(msg.str());
  }
}

/// Step durations of one segment: n_full steps of dt plus an optional shorter remainder.
struct StepPlan {
  long long n_full = 0;
  double remainder = 0.0;
};

StepPlan plan_steps(double duration, double dt) {
  StepPlan p;
  if (duration <= 0.0) return p;
  const double ratio = duration / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) < 1e-9 * std::max(1.0, ratio)) {
    p.n_full = static_cast<long long>(nearest);
    return p;
  }
  p.n_full = static_cast<long long>(std::floor(ratio));
  p.remainder = duration - static_cast<double>(p.n_full) * dt;
  if (p.remainder < 1e-9 * dt) p.remainder = 0.0;
  return p;
}

struct CompiledSegment {
  const NonHermitianPropagator* full = nullptr;
  std::optional<NonHermitianPropagator> tail;
  StepPlan plan;
};

/// Propagators for every segment of a schedule, shared read-only between trajectories.
struct CompiledSchedule {
  SparseOperator h_e_cost, h_e_mix;
  std::optional<NonHermitianPropagator> cost_dt, mix_dt;
  std::vector<CompiledSegment> segments;
  std::vector<JumpOperator> jumps;
  double dt = 0.0;

  CompiledSchedule(const ControlSchedule& schedule, const ComplexMatrix& h, const ComplexMatrix& h_mix,
                   const OpenSystem& sys, double step)
      : jumps(sys.jumps), dt(step) {
    if (!(step > 0.0)) throw InvalidArgument("trajectory: dt must be > 0");
    if (schedule.size() == 0) throw InvalidArgument("trajectory: schedule is empty");
    SparseOperator damping(sys.dim(), sys.dim());
    for (const auto& j : jumps) {
      damping += SparseOperator(Complex(0.0, 0.5 * j.gamma) * SparseOperator(SparseOperator(j.op.adjoint()) * j.op));
    }
    h_e_cost = SparseOperator(sys.lift(h) + sys.h_static) - damping;
    h_e_mix = SparseOperator(sys.lift(h_mix) + sys.h_static) - damping;
    cost_dt.emplace(h_e_cost, dt);
    mix_dt.emplace(h_e_mix, dt);
    for (int j = 0; j < schedule.depth(); ++j) {
      add(schedule.zeta(j), h_e_cost, &*cost_dt);
      add(schedule.beta(j), h_e_mix, &*mix_dt);
    }
  }

  void add(double duration, const SparseOperator& h_e, const NonHermitianPropagator* full) {
    CompiledSegment seg;
    seg.plan = plan_steps(duration, dt);
    if (seg.plan.n_full == 0 && seg.plan.remainder == 0.0) return;
    seg.full = full;
    if (seg.plan.remainder > 0.0) seg.tail.emplace(h_e, seg.plan.remainder);
    segments.push_back(std::move(seg));
  }
};

struct StepWork {
  StateVector tmp, s1, s2;
  std::vector<StateVector> lphi;
  std::vector<double> dp;
};

/// One first-order step in place. Returns the fired channel or -1.
int step_in_place(StateVector& phi, const NonHermitianPropagator& u, const std::vector<JumpOperator>& jumps,
                  double h, CounterStream::Pair r, StepWork& w) {
  w.lphi.resize(jumps.size());
  w.dp.resize(jumps.size());
  double total = 0.0;
  for (std::size_t f = 0; f < jumps.size(); ++f) {
    w.lphi[f].noalias() = jumps[f].op * phi;
    w.dp[f] = h * jumps[f].gamma * w.lphi[f].squaredNorm();
    total += w.dp[f];
  }
  check_jump_probability(total, h);
  if (total <= 0.0 || r.r1 > total) {
    u.apply(phi, w.tmp, w.s1, w.s2);
    phi.swap(w.tmp);
    phi /= phi.norm();
    return -1;
  }
  const std::size_t f = select_channel(w.dp, r.r2);
  phi = w.lphi[f] / w.lphi[f].norm();
  return static_cast<int>(f);
}

TrajectoryOutcome run_compiled(const StateVector& phi0, const CompiledSchedule& cs, std::uint64_t seed,
                               StepWork& w) {
  TrajectoryOutcome out;
  out.seed = seed;
  out.phi = phi0;
  const CounterStream rng(seed);
  std::uint64_t index = 0;
  for (const auto& seg : cs.segments) {
    for (long long s = 0; s < seg.plan.n_full; ++s) {
      if (step_in_place(out.phi, *seg.full, cs.jumps, cs.dt, rng.draw(index++), w) >= 0) ++out.jumps;
    }
    if (seg.tail) {
      if (step_in_place(out.phi, *seg.tail, cs.jumps, seg.plan.remainder, rng.draw(index++), w) >= 0) {
        ++out.jumps;
      }
    }
  }
  return out;
}

/// Pairwise reduction over leaves 0..n-1 whose association depends only on n.
class TreeReducer {
 public:
  explicit TreeReducer(std::size_t n_leaves) : n_(n_leaves) {}

  void insert(std::size_t leaf, ComplexMatrix value) {
    std::lock_guard<std::mutex> lock(mu_);
    std::size_t level = 0, idx = leaf;
    for (;;) {
      const std::size_t sib = idx ^ 1U;
      const std::size_t width = std::size_t{1} << level;
      if (sib * width >= n_) break;  // sibling covers no leaves
      auto it = nodes_.find({level, sib});
      if (it == nodes_.end()) break;
      if (sib < idx) {
        it->second += value;
        value = std::move(it->second);
      } else {
        value += it->second;
      }
      nodes_.erase(it);
      ++level;
      idx >>= 1U;
    }
    nodes_.emplace(std::make_pair(level, idx), std::move(value));
  }

  ComplexMatrix finish() {
    // Remaining nodes cover disjoint leaf ranges; add them left to right.
    std::vector<std::pair<std::size_t, ComplexMatrix*>> parts;
    for (auto& [key, m] : nodes_) parts.emplace_back(key.second << key.first, &m);
    std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (parts.empty()) throw InvalidArgument("ensemble: nothing to reduce");
    ComplexMatrix total = std::move(*parts.front().second);
    for (std::size_t k = 1; k < parts.size(); ++k) total += *parts[k].second;
    nodes_.clear();
    return total;
  }

 private:
  std::size_t n_;
  std::mutex mu_;
  std::map<std::pair<std::size_t, std::size_t>, ComplexMatrix> nodes_;
};

constexpr std::size_t kBlock = 8;

ComplexMatrix leaf(const StateVector& phi, const OpenSystem& sys, Accumulate kind) {
  switch (kind) {
    case Accumulate::Full:
      return phi * phi.adjoint();
    case Accumulate::Principal: {
      const RowMap m(phi.data(), sys.dim_p, sys.dim_a);
      return m * m.adjoint();
    }
    case Accumulate::Diagonal: {
      const RowMap m(phi.data(), sys.dim_p, sys.dim_a);
      return m.rowwise().squaredNorm().cast<Complex>();
    }
  }
  return {};
}

}  // namespace

void TrajectoryConfig::validate() const {
  if (n_traj < 1) throw InvalidArgument("trajectory: n_traj must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("trajectory: dt must be > 0");
}

ComplexMatrix effective_hamiltonian(const ComplexMatrix& h_total, const std::vector<DenseJump>& jumps) {
  ComplexMatrix h_e = h_total;
  for (const auto& j : jumps) {
    if (j.op.rows() != h_total.rows() || j.op.cols() != h_total.cols()) {
      throw InvalidArgument("effective_hamiltonian: dimension mismatch");
    }
    h_e -= Complex(0.0, 0.5 * j.gamma) * (j.op.adjoint() * j.op);
  }
  return h_e;
}

std::size_t select_channel(const std::vector<double>& dp, double r2) {
  if (dp.empty()) throw InvalidArgument("select_channel: no channels");
  std::vector<std::size_t> order(dp.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dp[a] > dp[b]; });
  double total = 0.0;
  for (double p : dp) total += p;
  const double target = r2 * total;
  double cum = 0.0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    cum += dp[order[pos]];
    if (cum >= target && dp[order[pos]] > 0.0) return order[pos];
  }
  // Rounding left the target just above the sum: take the last channel with nonzero weight.
  for (std::size_t pos = order.size(); pos-- > 0;) {
    if (dp[order[pos]] > 0.0) return order[pos];
  }
  return order.front();
}

StateVector trajectory_step(const StateVector& phi, const ComplexMatrix& h_e,
                            const std::vector<DenseJump>& jumps, double dt, double r1, double r2,
                            int* jumped) {
  if (!(dt > 0.0)) throw InvalidArgument("trajectory_step: dt must be > 0");
  if (h_e.rows() != phi.size()) throw InvalidArgument("trajectory_step: dimension mismatch");
  std::vector<StateVector> lphi;
  std::vector<double> dp;
  double total = 0.0;
  for (const auto& j : jumps) {
    lphi.push_back(j.op * phi);
    dp.push_back(dt * j.gamma * lphi.back().squaredNorm());
    total += dp.back();
  }
  check_jump_probability(total, dt);
  if (total <= 0.0 || r1 > total) {
    if (jumped) *jumped = -1;
    StateVector next = expm_propagator(h_e, dt) * phi;
    return next / next.norm();
  }
  const std::size_t f = select_channel(dp, r2);
  if (jumped) *jumped = static_cast<int>(f);
  return lphi[f] / lphi[f].norm();
}

NonHermitianPropagator::NonHermitianPropagator(const SparseOperator& h_e, double t)
    : dense_(h_e.rows() <= kDenseLimit) {
  if (!(t > 0.0)) throw InvalidArgument("propagator: t must be > 0");
  if (dense_) {
    u_ = expm_propagator(ComplexMatrix(h_e), t);
  } else {
    a_ = Complex(0.0, -t) * h_e;
    const double norm = row_sum_norm(a_);
    substeps_ = std::max(1, static_cast<int>(std::ceil(norm)));
    if (substeps_ > 1) a_ /= static_cast<double>(substeps_);
  }
}

void NonHermitianPropagator::apply(const StateVector& in, StateVector& out, StateVector& s1,
                                   StateVector& s2) const {
  if (dense_) {
    out.noalias() = u_ * in;
    return;
  }
  out = in;
  for (int sub = 0; sub < substeps_; ++sub) {
    s1 = out;  // current term
    for (int k = 1; k <= 60; ++k) {
      s2.noalias() = a_ * s1;
      s2 /= static_cast<double>(k);
      out += s2;
      s1.swap(s2);
      if (s1.squaredNorm() < 1e-32 * out.squaredNorm()) break;
    }
  }
}

TrajectoryOutcome run_trajectory(const StateVector& phi0, const ControlSchedule& schedule,
                                 const ComplexMatrix& h, const ComplexMatrix& h_mix,
                                 const OpenSystem& sys, double dt, std::uint64_t seed) {
  if (phi0.size() != sys.dim()) throw InvalidArgument("run_trajectory: state dimension mismatch");
  const CompiledSchedule cs(schedule, h, h_mix, sys, dt);
  StepWork w;
  return run_compiled(phi0, cs, seed, w);
}

double TrajectoryEnsembleResult::mean_jumps() const {
  if (per_traj.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : per_traj) s += r.jumps;
  return s / static_cast<double>(per_traj.size());
}

TrajectoryEnsembleResult ensemble_average(const std::vector<StateVector>& phis) {
  if (phis.empty()) throw InvalidArgument("ensemble_average: empty list");
  TreeReducer tree(phis.size());
  for (std::size_t k = 0; k < phis.size(); ++k) {
    if (phis[k].size() != phis.front().size()) throw InvalidArgument("ensemble_average: mixed dimensions");
    tree.insert(k, phis[k] * phis[k].adjoint());
  }
  TrajectoryEnsembleResult res;
  res.kind = Accumulate::Full;
  res.rho = tree.finish() / static_cast<double>(phis.size());
  return res;
}

TrajectoryEnsembleResult run_ensemble(const StateVector& phi0, const ControlSchedule& schedule,
                                      const ComplexMatrix& h, const ComplexMatrix& h_mix,
                                      const OpenSystem& sys, const TrajectoryConfig& cfg, int workers,
                                      Accumulate kind, const ComplexMatrix* h_obs) {
  cfg.validate();
  if (phi0.size() != sys.dim()) throw InvalidArgument("run_ensemble: state dimension mismatch");
  if (h_obs != nullptr && (h_obs->rows() != sys.dim_p || h_obs->cols() != sys.dim_p)) {
    throw InvalidArgument("run_ensemble: observable must act on the principal space");
  }
  const CompiledSchedule cs(schedule, h, h_mix, sys, cfg.dt);
  const auto n = static_cast<std::size_t>(cfg.n_traj);
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;

  TrajectoryEnsembleResult res;
  res.kind = kind;
  res.per_traj.resize(n);
  std::vector<double> energies(n, 0.0);
  TreeReducer tree(n_blocks);

  parallel_for(n_blocks, workers, [&](std::size_t b) {
    StepWork w;
    std::optional<ComplexMatrix> acc;
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t k = b * kBlock; k < end; ++k) {
      const std::uint64_t seed = cfg.base_seed ^ static_cast<std::uint64_t>(k);
      TrajectoryOutcome o = run_compiled(phi0, cs, seed, w);
      res.per_traj[k] = {seed, o.jumps};
      if (h_obs != nullptr) {
        const RowMap m(o.phi.data(), sys.dim_p, sys.dim_a);
        energies[k] = (m.adjoint() * (*h_obs) * m).trace().real();
      }
      ComplexMatrix l = leaf(o.phi, sys, kind);
      if (acc) {
        *acc += l;
      } else {
        acc = std::move(l);
      }
    }
    tree.insert(b, std::move(*acc));
  });

  res.rho = tree.finish() / static_cast<double>(n);
  if (h_obs != nullptr && n > 1) {
    double mean = 0.0;
    for (double e : energies) mean += e;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double e : energies) var += (e - mean) * (e - mean);
    var /= static_cast<double>(n - 1);
    res.std_err_estimate = std::sqrt(var / static_cast<double>(n));
  }
  return res;
}

}  // namespace nmqaoa
