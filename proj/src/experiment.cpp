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

#include "nmqaoa/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "nmqaoa/error.hpp"
#include "nmqaoa/memory.hpp"
#include "nmqaoa/nonmarkov.hpp"
#include "nmqaoa/parallel.hpp"

namespace nmqaoa {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---- JSON helpers -------------------------------------------------------------------------------

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items()) {
    if (allowed.count(key) == 0) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double get_double(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
  return v.get<bool>();
}

std::vector<double> get_doubles(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where + "." + key + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> get_ints(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + " must be an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ConfigError(where + "." + key + " must be an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

std::string environment_name(Environment e) {
  switch (e) {
    case Environment::Augmented:
      return "augmented";
    case Environment::Markovian:
      return "markovian";
    case Environment::MarkovianWideband:
      return "markovian-wideband";
    case Environment::Closed:
      return "closed";
  }
  return "";
}

Environment parse_environment(const std::string& s) {
  if (s == "augmented") return Environment::Augmented;
  if (s == "markovian") return Environment::Markovian;
  if (s == "markovian-wideband") return Environment::MarkovianWideband;
  if (s == "closed") return Environment::Closed;
  throw ConfigError("environment must be one of augmented, markovian, markovian-wideband, closed");
}

WeightedGraph named_graph(const std::string& name) {
  if (name == "paper-4node") return fixtures::four_node();
  const std::string prefix = "table-";
  if (name.rfind(prefix, 0) == 0) {
    try {
      const int n = std::stoi(name.substr(prefix.size()));
      if (n >= 2 && n <= 11) return fixtures::table_prefix(n);
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("graph: unknown named graph '" + name + "' (use paper-4node or table-2 .. table-11)");
}

// ---- formatting --------------------------------------------------------------------------------

std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

double energy_of(const Evaluation& e, const ComplexMatrix& h) {
  if (e.diagonal) return (h.diagonal().array() * e.rho_p.col(0).array()).sum().real();
  return (h * e.rho_p).trace().real();
}

ComplexMatrix as_density(const Evaluation& e) {
  if (!e.diagonal) return e.rho_p;
  return e.rho_p.col(0).asDiagonal();
}

SolverConfig inner_solver(const ExperimentConfig& cfg) {
  SolverConfig s{cfg.solver.dt};
  if (cfg.optimizer.dt) s.dt = *cfg.optimizer.dt;
  return s;
}

TrajectoryConfig trajectory_config(const ExperimentConfig& cfg, double dt) {
  TrajectoryConfig t;
  t.n_traj = cfg.solver.n_traj;
  t.dt = dt;
  t.base_seed = cfg.solver.seed;
  return t;
}

std::unique_ptr<Evaluator> make_evaluator(const ExperimentConfig& cfg, const OpenSystem& sys, const ComplexMatrix& h,
                                          const ComplexMatrix& h_mix, double dt, int workers, Accumulate kind) {
  if (cfg.solver.type == Backend::Master) {
    return std::make_unique<MasterEvaluator>(sys, h, h_mix, SolverConfig{dt});
  }
  return std::make_unique<TrajectoryEvaluator>(sys, h, h_mix, trajectory_config(cfg, dt), workers, kind);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// ---- configuration ------------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  try {
    if (graph.n_nodes() < 2) throw ConfigError("graph: at least 2 nodes are required");
    if (graph.n_nodes() <= 24) {
      const CutExtrema ext = brute_force_extrema(graph);
      if (!(ext.c_max > ext.c_min)) throw ConfigError("degenerate graph: C_max equals C_min");
    }
    if (environment == Environment::Augmented || environment == Environment::MarkovianWideband) {
      if (modes.empty()) throw ConfigError("modes: at least one mode is required");
      for (const auto& m : modes) m.validate();
    }
    if (!(markovian_rate >= 0.0)) throw ConfigError("markovian_rate must be >= 0");
    if (!(wideband_factor > 0.0)) throw ConfigError("wideband_factor must be > 0");
    if (!(solver.dt > 0.0)) throw ConfigError("solver.dt must be > 0");
    if (solver.n_traj < 1) throw ConfigError("solver.n_traj must be >= 1");
    optimizer.config.validate();
    if (optimizer.dt && !(*optimizer.dt > 0.0)) throw ConfigError("optimizer.dt must be > 0");
    ControlSchedule init(optimizer.init);
    ControlSchedule fixed(schedule);
    if (init.size() == 0) throw ConfigError("optimizer.init must be nonempty");
    if (fixed.size() == 0) throw ConfigError("schedule must be nonempty");
    if (!(metrics.grid_dt > 0.0)) throw ConfigError("metrics.grid_dt must be > 0");
    parse_sweep_param(sweep.param);
    if (sweep.values.empty()) throw ConfigError("sweep.values must be nonempty");
    if (explore.n_samples < 1) throw ConfigError("explore.n_samples must be >= 1");
    if (!(explore.tau_min >= 0.0) || !(explore.tau_max >= explore.tau_min)) {
      throw ConfigError("explore.tau_range must satisfy 0 <= min <= max");
    }
    for (int n : benchmark.node_counts) {
      if (n < 2 || n > 11) throw ConfigError("benchmark.node_counts entries must be in [2, 11]");
    }
    for (int n : benchmark.traj_counts) {
      if (n < 1) throw ConfigError("benchmark.traj_counts entries must be >= 1");
    }
    if (ControlSchedule(benchmark.schedule).size() == 0) throw ConfigError("benchmark.schedule must be nonempty");
    if (!(benchmark.dt > 0.0)) throw ConfigError("benchmark.dt must be > 0");
    if (multinode.node_min < 5 || multinode.node_max > 11 || multinode.node_min > multinode.node_max) {
      throw ConfigError("multinode.node_range must lie within [5, 11]");
    }
    if (workers < 0) throw ConfigError("workers must be >= 0");
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

json ExperimentConfig::to_json() const {
  json modes_j = json::array();
  for (const auto& m : modes) modes_j.push_back(m.to_json());
  json opt = {{"enabled", optimizer.enabled},
              {"xi", optimizer.config.xi},
              {"upsilon", optimizer.config.upsilon},
              {"eta", optimizer.config.eta},
              {"epsilon", optimizer.config.epsilon},
              {"max_iters", optimizer.config.max_iters},
              {"init", optimizer.init}};
  if (optimizer.dt) opt["dt"] = *optimizer.dt;
  return {
      {"name", name},
      {"graph", graph.to_json()},
      {"environment", environment_name(environment)},
      {"modes", modes_j},
      {"markovian_rate", markovian_rate},
      {"wideband_factor", wideband_factor},
      {"solver",
       {{"type", solver.type == Backend::Master ? "master" : "trajectory"},
        {"dt", solver.dt},
        {"n_traj", solver.n_traj},
        {"seed", solver.seed}}},
      {"optimizer", opt},
      {"schedule", schedule},
      {"metrics", {{"blp", metrics.blp}, {"grid_dt", metrics.grid_dt}}},
      {"sweep", {{"param", sweep.param}, {"values", sweep.values}, {"optimize", sweep.optimize}}},
      {"explore",
       {{"n_samples", explore.n_samples},
        {"tau_range", {explore.tau_min, explore.tau_max}},
        {"seed", explore.seed}}},
      {"benchmark",
       {{"node_counts", benchmark.node_counts},
        {"traj_counts", benchmark.traj_counts},
        {"schedule", benchmark.schedule},
        {"dt", benchmark.dt},
        {"memory_cap_bytes", benchmark.memory_cap_bytes}}},
      {"multinode", {{"node_range", {multinode.node_min, multinode.node_max}}}},
      {"workers", workers},
  };
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  require_object(j, "config");
  check_keys(j, "config",
             {"preset", "name", "graph", "environment", "modes", "markovian_rate", "wideband_factor", "solver",
              "optimizer", "schedule", "metrics", "sweep", "explore", "benchmark", "multinode", "workers"});
  ExperimentConfig c;
  if (j.contains("preset")) {
    if (!j.at("preset").is_string()) throw ConfigError("preset must be a string");
    c = preset(j.at("preset").get<std::string>());
  }
  try {
    if (j.contains("name")) {
      if (!j.at("name").is_string()) throw ConfigError("name must be a string");
      c.name = j.at("name").get<std::string>();
    }
    if (j.contains("graph")) {
      const json& g = j.at("graph");
      c.graph = g.is_string() ? named_graph(g.get<std::string>()) : WeightedGraph::from_json(g);
    }
    if (j.contains("environment")) {
      if (!j.at("environment").is_string()) throw ConfigError("environment must be a string");
      c.environment = parse_environment(j.at("environment").get<std::string>());
    }
    if (j.contains("modes")) {
      if (!j.at("modes").is_array()) throw ConfigError("modes must be an array");
      c.modes.clear();
      for (const auto& m : j.at("modes")) c.modes.push_back(LorentzianMode::from_json(m));
    }
    if (j.contains("markovian_rate")) c.markovian_rate = get_double(j, "markovian_rate", "config");
    if (j.contains("wideband_factor")) c.wideband_factor = get_double(j, "wideband_factor", "config");
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      require_object(s, "solver");
      check_keys(s, "solver", {"type", "dt", "n_traj", "seed"});
      if (s.contains("type")) {
        const json& t = s.at("type");
        if (t == "master") {
          c.solver.type = Backend::Master;
        } else if (t == "trajectory") {
          c.solver.type = Backend::Trajectory;
        } else {
          throw ConfigError("solver.type must be master or trajectory");
        }
      }
      if (s.contains("dt")) c.solver.dt = get_double(s, "dt", "solver");
      if (s.contains("n_traj")) c.solver.n_traj = get_int(s, "n_traj", "solver");
      if (s.contains("seed")) c.solver.seed = get_u64(s, "seed", "solver");
    }
    if (j.contains("optimizer")) {
      const json& o = j.at("optimizer");
      require_object(o, "optimizer");
      check_keys(o, "optimizer", {"enabled", "xi", "upsilon", "eta", "epsilon", "max_iters", "init", "dt"});
      if (o.contains("enabled")) c.optimizer.enabled = get_bool(o, "enabled", "optimizer");
      if (o.contains("xi")) c.optimizer.config.xi = get_double(o, "xi", "optimizer");
      if (o.contains("upsilon")) c.optimizer.config.upsilon = get_double(o, "upsilon", "optimizer");
      if (o.contains("eta")) c.optimizer.config.eta = get_double(o, "eta", "optimizer");
      if (o.contains("epsilon")) c.optimizer.config.epsilon = get_double(o, "epsilon", "optimizer");
      if (o.contains("max_iters")) c.optimizer.config.max_iters = get_int(o, "max_iters", "optimizer");
      if (o.contains("init")) c.optimizer.init = get_doubles(o, "init", "optimizer");
      if (o.contains("dt")) {
        if (o.at("dt").is_null()) {
          c.optimizer.dt.reset();
        } else {
          c.optimizer.dt = get_double(o, "dt", "optimizer");
        }
      }
    }
    if (j.contains("schedule")) c.schedule = get_doubles(j, "schedule", "config");
    if (j.contains("metrics")) {
      const json& m = j.at("metrics");
      require_object(m, "metrics");
      check_keys(m, "metrics", {"blp", "grid_dt"});
      if (m.contains("blp")) c.metrics.blp = get_bool(m, "blp", "metrics");
      if (m.contains("grid_dt")) c.metrics.grid_dt = get_double(m, "grid_dt", "metrics");
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      require_object(s, "sweep");
      check_keys(s, "sweep", {"param", "values", "optimize"});
      if (s.contains("param")) {
        if (!s.at("param").is_string()) throw ConfigError("sweep.param must be a string");
        c.sweep.param = s.at("param").get<std::string>();
      }
      if (s.contains("values")) c.sweep.values = get_doubles(s, "values", "sweep");
      if (s.contains("optimize")) c.sweep.optimize = get_bool(s, "optimize", "sweep");
    }
    if (j.contains("explore")) {
      const json& e = j.at("explore");
      require_object(e, "explore");
      check_keys(e, "explore", {"n_samples", "tau_range", "seed"});
      if (e.contains("n_samples")) c.explore.n_samples = get_int(e, "n_samples", "explore");
      if (e.contains("tau_range")) {
        const auto r = get_doubles(e, "tau_range", "explore");
        if (r.size() != 2) throw ConfigError("explore.tau_range must be [min, max]");
        c.explore.tau_min = r[0];
        c.explore.tau_max = r[1];
      }
      if (e.contains("seed")) c.explore.seed = get_u64(e, "seed", "explore");
    }
    if (j.contains("benchmark")) {
      const json& b = j.at("benchmark");
      require_object(b, "benchmark");
      check_keys(b, "benchmark", {"node_counts", "traj_counts", "schedule", "dt", "memory_cap_bytes"});
      if (b.contains("node_counts")) c.benchmark.node_counts = get_ints(b, "node_counts", "benchmark");
      if (b.contains("traj_counts")) c.benchmark.traj_counts = get_ints(b, "traj_counts", "benchmark");
      if (b.contains("schedule")) c.benchmark.schedule = get_doubles(b, "schedule", "benchmark");
      if (b.contains("dt")) c.benchmark.dt = get_double(b, "dt", "benchmark");
      if (b.contains("memory_cap_bytes")) c.benchmark.memory_cap_bytes = get_u64(b, "memory_cap_bytes", "benchmark");
    }
    if (j.contains("multinode")) {
      const json& m = j.at("multinode");
      require_object(m, "multinode");
      check_keys(m, "multinode", {"node_range"});
      if (m.contains("node_range")) {
        const auto r = get_ints(m, "node_range", "multinode");
        if (r.size() != 2) throw ConfigError("multinode.node_range must be [min, max]");
        c.multinode.node_min = r[0];
        c.multinode.node_max = r[1];
      }
    }
    if (j.contains("workers")) c.workers = get_int(j, "workers", "config");
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

std::vector<std::string> preset_names() {
  return {"paper-4node-nonmarkovian", "paper-4node-markovian", "paper-4node-wideband", "paper-4node-closed",
          "paper-4node-double",       "sweep-kappa",           "sweep-gamma",          "sweep-omega",
          "explore-single",           "explore-double",        "benchmark-table",      "multinode-table"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.optimizer.dt = 0.01;
  const LorentzianMode primary{10.0, 0.6, 1.0, 8};
  const LorentzianMode secondary{5.0, 1.0, 0.8, 4};
  if (name == "paper-4node-nonmarkovian") {
    c.schedule = {2.1, 0.5, 2.1, 1.9};
    c.metrics.blp = true;
  } else if (name == "paper-4node-markovian") {
    c.environment = Environment::Markovian;
    c.schedule = {0.6, 2.9, 1.2, 1.0};
    c.metrics.blp = true;
  } else if (name == "paper-4node-wideband") {
    c.environment = Environment::MarkovianWideband;
    c.schedule = {0.6, 2.9, 1.2, 1.0};
    c.optimizer.dt = 1e-3;
  } else if (name == "paper-4node-closed") {
    c.environment = Environment::Closed;
  } else if (name == "paper-4node-double") {
    c.modes = {LorentzianMode{10.0, 0.6, 1.0, 4}, secondary};
  } else if (name == "sweep-kappa") {
    c.optimizer.enabled = false;
    c.sweep = {"kappa", {0.1, 0.5, 1.0, 2.0, 5.0}, false};
  } else if (name == "sweep-gamma") {
    c.optimizer.enabled = false;
    c.sweep = {"gamma", {0.1, 0.3, 1.0, 3.0, 10.0, 100.0}, false};
  } else if (name == "sweep-omega") {
    c.optimizer.enabled = false;
    c.sweep = {"omega_a", {1.0, 2.0, 5.0, 10.0, 20.0}, false};
  } else if (name == "explore-single") {
    c.optimizer.enabled = false;
    c.explore = {28, 0.5, 4.0, 7};
    c.solver.dt = 0.01;
  } else if (name == "explore-double") {
    c.optimizer.enabled = false;
    c.modes = {LorentzianMode{10.0, 0.6, 1.0, 4}, secondary};
    c.explore = {100, 0.5, 4.0, 7};
    c.solver.dt = 0.01;
  } else if (name == "benchmark-table") {
    c.optimizer.enabled = false;
    c.modes = {primary};
  } else if (name == "multinode-table") {
    c.graph = fixtures::table_prefix(5);
    c.solver = {Backend::Trajectory, 5e-3, 100, 42};
    c.optimizer.config.max_iters = 20;
    c.optimizer.dt.reset();
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return ExperimentConfig::from_json(j);
}

OpenSystem build_open_system(const ExperimentConfig& cfg, int n_qubits) {
  switch (cfg.environment) {
    case Environment::Augmented:
      return AugmentedModel(n_qubits, cfg.modes).system();
    case Environment::MarkovianWideband: {
      std::vector<LorentzianMode> wide = cfg.modes;
      for (auto& m : wide) m.gamma *= cfg.wideband_factor;
      return AugmentedModel(n_qubits, wide).system();
    }
    case Environment::Markovian:
      return markovian_system(n_qubits, cfg.markovian_rate);
    case Environment::Closed:
      return closed_system(n_qubits);
  }
  throw ConfigError("unknown environment");
}

// ---- commands -----------------------------------------------------------------------------------

json cmd_solve(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const int n = cfg.graph.n_nodes();
  const ComplexMatrix h = build_cost_hamiltonian(cfg.graph);
  const ComplexMatrix h_mix = build_mixer(n);
  const CutExtrema ext = brute_force_extrema(cfg.graph);
  const OpenSystem sys = build_open_system(cfg, n);

  ControlSchedule tau(cfg.optimizer.enabled ? cfg.optimizer.init : cfg.schedule);
  json out;
  out["name"] = cfg.name;
  out["environment"] = environment_name(cfg.environment);
  out["backend"] = cfg.solver.type == Backend::Master ? "master" : "trajectory";
  out["schedule_initial"] = tau.tau();

  json trace = json::array();
  json timing = json::object();
  if (cfg.optimizer.enabled) {
    const auto ev = make_evaluator(cfg, sys, h, h_mix, inner_solver(cfg).dt, workers, Accumulate::Principal);
    const OptimizationResult opt = optimize(tau, cfg.optimizer.config, *ev, workers);
    tau = opt.best;
    json times = json::array();
    for (const auto& r : opt.trace.records) {
      trace.push_back({{"iteration", r.iteration},
                       {"tau", r.tau},
                       {"h", r.h},
                       {"y", r.y},
                       {"effective_depth", r.effective_depth}});
      times.push_back(r.wall_time);
    }
    out["converged"] = opt.trace.converged;
    out["iterations"] = opt.trace.iterations();
    timing["iteration_wall_time_s"] = times;
  }

  // Final state at the reporting step size.
  Evaluation fin;
  if (cfg.solver.type == Backend::Master) {
    const PiecewiseResult pr =
        evolve_piecewise(sys.initial_state(uniform_superposition(n)), tau, h, h_mix, sys, SolverConfig{cfg.solver.dt});
    fin.rho_p = pr.rho_p;
    out["max_top_level_population"] = pr.max_top_population;
  } else {
    fin = make_evaluator(cfg, sys, h, h_mix, cfg.solver.dt, workers, Accumulate::Principal)->evaluate(tau);
  }
  const ComplexMatrix rho_p = as_density(fin);
  const double energy = energy_of(fin, h);

  out["schedule"] = tau.tau();
  out["effective_depth"] = tau.effective_depth();
  out["l1_norm"] = tau.l1_norm();
  out["h"] = energy;
  out["y"] = energy + cfg.optimizer.config.xi * tau.l1_norm();
  out["approximation_ratio"] = approximation_ratio(h, rho_p, ext);
  out["optimal_probability"] = optimal_probability(rho_p, cfg.graph);
  out["c_max"] = ext.c_max;
  out["c_min"] = ext.c_min;
  out["argmin"] = ext.argmin_bitstrings;
  json probs = json::array();
  for (const auto& p : solution_probabilities(rho_p, true, &cfg.graph)) {
    probs.push_back({{"bitstrings", {p.bitstring, bitstring((std::size_t{1} << n) - 1 -
                                                                std::stoull(p.bitstring, nullptr, 2), n)}},
                     {"probability", p.probability},
                     {"energy", p.energy}});
  }
  out["probabilities"] = probs;
  out["trace"] = trace;

  if (cfg.metrics.blp) {
    const DistanceTrace dtr = distance_trace(sys, tau, h, h_mix, cfg.metrics.grid_dt, SolverConfig{cfg.solver.dt});
    const NonMarkovReport rep = exploration_rate(dtr);
    out["nonmarkov"] = {{"n_phi", rep.n_phi}, {"t_e", rep.t_e}, {"sigma_bar", rep.sigma_bar}};
  }
  timing["total_wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out["timing"] = timing;
  return out;
}

std::string cmd_sweep(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  if (cfg.environment != Environment::Augmented) throw ConfigError("sweep requires the augmented environment");
  SweepBase base;
  base.graph = cfg.graph;
  base.modes = cfg.modes;
  base.schedule = ControlSchedule(cfg.schedule);
  base.solver = SolverConfig{cfg.solver.dt};
  base.grid_dt = cfg.metrics.grid_dt;
  if (cfg.sweep.optimize) {
    base.optimizer = cfg.optimizer.config;
    base.optimizer_dt = inner_solver(cfg).dt;
  }
  const auto points = sweep_parameter(base, parse_sweep_param(cfg.sweep.param), cfg.sweep.values, workers);
  std::string csv = "param_value,n_phi_initial,n_phi_optimized,r_initial,r_optimized,sigma_bar\n";
  for (const auto& p : points) {
    csv += join_row({format_number(p.value), format_number(p.n_phi_initial), format_number(p.n_phi_optimized),
                     format_number(p.r_initial), format_number(p.r_optimized), format_number(p.sigma_bar)});
  }
  return csv;
}

std::string cmd_explore(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  if (cfg.environment != Environment::Augmented) throw ConfigError("explore requires the augmented environment");
  const auto pts = explore_scatter(cfg.graph, cfg.modes, cfg.explore.n_samples, cfg.explore.tau_min,
                                   cfg.explore.tau_max, cfg.explore.seed, SolverConfig{cfg.solver.dt},
                                   cfg.metrics.grid_dt, workers);
  std::string csv = "sample,zeta1,beta1,zeta2,beta2,sigma_bar,n_phi,t_e,r\n";
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const auto& p = pts[s];
    csv += join_row({std::to_string(s), format_number(p.tau[0]), format_number(p.tau[1]), format_number(p.tau[2]),
                     format_number(p.tau[3]), format_number(p.sigma_bar), format_number(p.n_phi),
                     format_number(p.t_e), format_number(p.r)});
  }
  return csv;
}

std::vector<BenchmarkRecord> run_benchmark(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  if (cfg.environment != Environment::Augmented) throw ConfigError("benchmark requires the augmented environment");
  const ControlSchedule tau(cfg.benchmark.schedule);
  std::vector<BenchmarkRecord> records;
  for (int n : cfg.benchmark.node_counts) {
    const WeightedGraph g = fixtures::table_prefix(n);
    const ComplexMatrix h = build_cost_hamiltonian(g);
    const ComplexMatrix h_mix = build_mixer(n);
    const OpenSystem sys = AugmentedModel(n, cfg.modes).system();

    std::size_t op_bytes = sparse_bytes(sys.h_static) * 3;  // static part plus both lifted generators
    for (const auto& j : sys.jumps) op_bytes += sparse_bytes(j.op) * 2;
    BenchmarkRecord master;
    master.n_nodes = n;
    master.backend = "master";
    master.projected_memory = projected_master_bytes(sys.dim(), op_bytes);
    master.result_distance = kNaN;
    master.time_ratio = kNaN;
    master.memory_ratio = kNaN;
    std::optional<ComplexMatrix> master_rho;
    if (master.projected_memory > cfg.benchmark.memory_cap_bytes) {
      master.status = "memory-limit";
    } else {
      master.status = "ok";
      const auto t0 = std::chrono::steady_clock::now();
      memory::PeakScope scope;
      {
        const ComplexMatrix rho0 = sys.initial_state(uniform_superposition(n));
        master_rho = evolve_piecewise(rho0, tau, h, h_mix, sys, SolverConfig{cfg.benchmark.dt}).rho_p;
      }
      master.peak_memory = scope.peak();
      master.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      master.time_ratio = 1.0;
      master.memory_ratio = 1.0;
      master.result_distance = 0.0;
    }
    records.push_back(master);

    for (int n_traj : cfg.benchmark.traj_counts) {
      BenchmarkRecord tr;
      tr.n_nodes = n;
      tr.backend = "trajectory";
      tr.n_traj = n_traj;
      tr.status = "ok";
      TrajectoryConfig tc;
      tc.n_traj = n_traj;
      tc.dt = cfg.benchmark.dt;
      tc.base_seed = cfg.solver.seed;
      const auto t0 = std::chrono::steady_clock::now();
      memory::PeakScope scope;
      ComplexMatrix rho_p;
      {
        const StateVector phi0 = sys.initial_vector(plus_state(n));
        rho_p = run_ensemble(phi0, tau, h, h_mix, sys, tc, workers, Accumulate::Principal).rho;
      }
      tr.peak_memory = scope.peak();
      tr.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (master_rho) {
        tr.result_distance = trace_distance(rho_p, *master_rho);
        tr.time_ratio = tr.wall_time / master.wall_time;
        tr.memory_ratio = master.peak_memory > 0 ? static_cast<double>(tr.peak_memory) /
                                                       static_cast<double>(master.peak_memory)
                                                 : kNaN;
      } else {
        tr.result_distance = kNaN;
        tr.time_ratio = kNaN;
        tr.memory_ratio = kNaN;
      }
      records.push_back(tr);
    }
  }
  return records;
}

std::string benchmark_csv(const std::vector<BenchmarkRecord>& records) {
  std::string csv =
      "n_nodes,backend,n_traj,status,wall_time_s,peak_memory_bytes,projected_master_bytes,result_distance,"
      "time_ratio,memory_ratio\n";
  for (const auto& r : records) {
    csv += join_row({std::to_string(r.n_nodes), r.backend, std::to_string(r.n_traj), r.status,
                     format_number(r.wall_time), std::to_string(r.peak_memory), std::to_string(r.projected_memory),
                     format_number(r.result_distance), format_number(r.time_ratio), format_number(r.memory_ratio)});
  }
  return csv;
}

std::string cmd_benchmark(const ExperimentConfig& cfg, int workers) {
  return benchmark_csv(run_benchmark(cfg, workers));
}

std::vector<MultinodeRow> run_multinode(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  std::vector<MultinodeRow> rows;
  for (int n = cfg.multinode.node_min; n <= cfg.multinode.node_max; ++n) {
    const WeightedGraph g = fixtures::table_prefix(n);
    const ComplexMatrix h = build_cost_hamiltonian(g);
    const ComplexMatrix h_mix = build_mixer(n);
    const CutExtrema ext = brute_force_extrema(g);
    const OpenSystem sys = build_open_system(cfg, n);
    const auto ev = make_evaluator(cfg, sys, h, h_mix, inner_solver(cfg).dt, workers, Accumulate::Diagonal);
    ControlSchedule tau(cfg.optimizer.init);
    Evaluation fin;
    if (cfg.optimizer.enabled) {
      const OptimizationResult opt = optimize(tau, cfg.optimizer.config, *ev, workers);
      tau = opt.best;
      fin = opt.best_evaluation;
    } else {
      fin = ev->evaluate(tau);
    }
    MultinodeRow row;
    row.n_nodes = n;
    row.h = energy_of(fin, h);
    row.r = (ext.c_max - row.h) / (ext.c_max - ext.c_min);
    row.l1_norm = tau.l1_norm();
    row.depth = tau.effective_depth();
    row.optimal_probability = optimal_probability(as_density(fin), g);
    rows.push_back(row);
  }
  return rows;
}

std::string cmd_multinode(const ExperimentConfig& cfg, int workers) {
  std::string csv = "n_nodes,r,l1_norm,depth,h,optimal_probability\n";
  for (const auto& r : run_multinode(cfg, workers)) {
    csv += join_row({std::to_string(r.n_nodes), format_number(r.r), format_number(r.l1_norm), std::to_string(r.depth),
                     format_number(r.h), format_number(r.optimal_probability)});
  }
  return csv;
}

}  // namespace nmqaoa
