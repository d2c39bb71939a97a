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

#include "nmqaoa/maxcut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"

#include "nmqaoa/error.hpp"

namespace nmqaoa {

WeightedGraph::WeightedGraph(int n_nodes, std::vector<Edge> edges) : n_nodes_(n_nodes) {
  if (n_nodes < 1) throw InvalidArgument("graph: n_nodes must be >= 1");
  std::set<std::pair<int, int>> seen;
  for (Edge e : edges) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 1 || e.j > n_nodes || e.i == e.j) {
      throw InvalidArgument("graph: invalid edge (" + std::to_string(e.i) + ", " +
                            std::to_string(e.j) + ")");
    }
    if (!std::isfinite(e.w)) throw InvalidArgument("graph: non-finite weight");
    if (!seen.insert({e.i, e.j}).second) {
      throw InvalidArgument("graph: duplicate edge (" + std::to_string(e.i) + ", " +
                            std::to_string(e.j) + ")");
    }
    edges_.push_back(e);
  }
}

double WeightedGraph::energy(std::size_t basis_index) const {
  double e = 0.0;
  for (const Edge& ed : edges_) {
    const int bi = static_cast<int>((basis_index >> (n_nodes_ - ed.i)) & 1U);
    const int bj = static_cast<int>((basis_index >> (n_nodes_ - ed.j)) & 1U);
    e += (bi == bj) ? ed.w : -ed.w;
  }
  return e;
}

WeightedGraph WeightedGraph::induced_prefix(int n) const {
  if (n < 1 || n > n_nodes_) throw InvalidArgument("graph: prefix size out of range");
  std::vector<Edge> sub;
  for (const Edge& e : edges_) {
    if (e.j <= n) sub.push_back(e);
  }
  return WeightedGraph(n, sub);
}

nlohmann::json WeightedGraph::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : edges_) edges.push_back({e.i, e.j, e.w});
  return {{"n_nodes", n_nodes_}, {"edges", edges}};
}

WeightedGraph WeightedGraph::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n_nodes") || !j.contains("edges")) {
    throw ConfigError("graph: expected {\"n_nodes\": int, \"edges\": [[i, j, w], ...]}");
  }
  if (!j.at("n_nodes").is_number_integer()) throw ConfigError("graph: n_nodes must be an integer");
  if (!j.at("edges").is_array()) throw ConfigError("graph: edges must be an array");
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !e[2].is_number()) {
      throw ConfigError("graph: each edge must be [i, j, w]");
    }
    edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  try {
    return WeightedGraph(j.at("n_nodes").get<int>(), edges);
  } catch (const InvalidArgument& ex) {
    throw ConfigError(ex.what());
  }
}

Eigen::VectorXd cost_diagonal(const WeightedGraph& g) {
  if (g.n_nodes() < 2) throw InvalidArgument("cost Hamiltonian needs at least 2 nodes");
  if (g.n_nodes() > 24) throw InvalidArgument("cost Hamiltonian limited to 24 qubits");
  const std::size_t dim = std::size_t{1} << g.n_nodes();
  Eigen::VectorXd d(static_cast<Index>(dim));
  for (std::size_t s = 0; s < dim; ++s) d(static_cast<Index>(s)) = g.energy(s);
  return d;
}

ComplexMatrix build_cost_hamiltonian(const WeightedGraph& g) {
  const Eigen::VectorXd d = cost_diagonal(g);
  return d.cast<Complex>().asDiagonal();
}

ComplexMatrix build_mixer(int n_qubits) {
  if (n_qubits < 1) throw InvalidArgument("mixer: n_qubits must be >= 1");
  const Index dim = Index{1} << n_qubits;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (Index s = 0; s < dim; ++s) {
    for (int q = 0; q < n_qubits; ++q) m(s ^ (Index{1} << q), s) += 1.0;
  }
  return m;
}

std::string bitstring(std::size_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q) {
    if ((index >> (n_qubits - 1 - q)) & 1U) s[static_cast<std::size_t>(q)] = '1';
  }
  return s;
}

CutExtrema brute_force_extrema(const WeightedGraph& g) {
  if (g.n_nodes() > 24) throw InvalidArgument("brute_force_extrema: at most 24 nodes");
  const std::size_t dim = std::size_t{1} << g.n_nodes();
  CutExtrema ext;
  ext.c_max = -std::numeric_limits<double>::infinity();
  ext.c_min = std::numeric_limits<double>::infinity();
  std::vector<double> energies(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    energies[s] = g.energy(s);
    ext.c_max = std::max(ext.c_max, energies[s]);
    ext.c_min = std::min(ext.c_min, energies[s]);
  }
  // Energies are sums of the same weights with different signs; allow only rounding slack.
  double scale = 0.0;
  for (const Edge& e : g.edges()) scale += std::abs(e.w);
  const double tol = 1e-12 * std::max(1.0, scale);
  for (std::size_t s = 0; s < dim; ++s) {
    if (energies[s] <= ext.c_min + tol) ext.argmin_bitstrings.push_back(bitstring(s, g.n_nodes()));
  }
  return ext;
}

double approximation_ratio(const ComplexMatrix& h, const ComplexMatrix& rho_p, const CutExtrema& ext) {
  if (h.rows() != rho_p.rows() || h.cols() != rho_p.cols()) {
    throw InvalidArgument("approximation_ratio: dimension mismatch");
  }
  const double spread = ext.c_max - ext.c_min;
  if (!(spread > 0.0)) throw InvalidArgument("degenerate graph: C_max equals C_min");
  const double energy = (h.cwiseProduct(rho_p.transpose())).sum().real();
  double r = (ext.c_max - energy) / spread;
  if (r < 0.0 && r > -1e-9) r = 0.0;
  if (r > 1.0 && r < 1.0 + 1e-9) r = 1.0;
  return r;
}

std::vector<SolutionProbability> solution_probabilities(const ComplexMatrix& rho_p, bool group_flips,
                                                        const WeightedGraph* g) {
  const Index dim = rho_p.rows();
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  if ((Index{1} << n) != dim || rho_p.cols() != dim) {
    throw InvalidArgument("solution_probabilities: dimension is not a power of two");
  }
  std::vector<SolutionProbability> out;
  const Index mask = dim - 1;
  for (Index s = 0; s < dim; ++s) {
    if (group_flips && s > (s ^ mask)) continue;
    SolutionProbability sp;
    sp.bitstring = bitstring(static_cast<std::size_t>(s), n);
    sp.probability = rho_p(s, s).real();
    if (group_flips) sp.probability += rho_p(s ^ mask, s ^ mask).real();
    if (g != nullptr) sp.energy = g->energy(static_cast<std::size_t>(s));
    out.push_back(sp);
  }
  return out;
}

double optimal_probability(const ComplexMatrix& rho_p, const WeightedGraph& g) {
  const CutExtrema ext = brute_force_extrema(g);
  double p = 0.0;
  const std::size_t dim = std::size_t{1} << g.n_nodes();
  double scale = 0.0;
  for (const Edge& e : g.edges()) scale += std::abs(e.w);
  for (std::size_t s = 0; s < dim; ++s) {
    if (g.energy(s) <= ext.c_min + 1e-12 * std::max(1.0, scale)) {
      p += rho_p(static_cast<Index>(s), static_cast<Index>(s)).real();
    }
  }
  return p;
}

namespace fixtures {

WeightedGraph four_node() {
  return WeightedGraph(4, {{1, 2, 0.23}, {3, 4, 0.04}, {1, 3, 0.57},
                           {1, 4, 0.39}, {2, 3, 0.66}, {2, 4, 0.79}});
}

WeightedGraph eleven_node_table() {
  // Upper triangle, row k lists weights to Z_{k+1} .. Z_10.
  static const std::vector<std::vector<double>> rows = {
      {0.60, 0.79, 0.71, 0.40, 0.66, 0.33, 0.50, 0.27, 0.88, 0.47},
      {0.03, 0.21, 0.56, 0.72, 0.82, 0.81, 0.66, 0.73, 0.53},
      {0.65, 0.75, 0.46, 0.86, 0.38, 0.66, 0.32, 0.85},
      {0.54, 0.09, 0.77, 0.96, 0.99, 0.35, 0.66},
      {0.41, 0.16, 0.79, 0.56, 0.63, 0.85},
      {0.22, 0.36, 0.34, 0.33, 0.44},
      {0.76, 0.01, 0.62, 0.42},
      {0.57, 0.13, 0.79},
      {0.93, 0.17},
      {0.73},
  };
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      edges.push_back({static_cast<int>(r) + 1, static_cast<int>(r + c) + 2, rows[r][c]});
    }
  }
  return WeightedGraph(11, edges);
}

WeightedGraph table_prefix(int n) { return eleven_node_table().induced_prefix(n); }

}  // namespace fixtures

}  // namespace nmqaoa
