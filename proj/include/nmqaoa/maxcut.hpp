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

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "nmqaoa/operators.hpp"

namespace nmqaoa {

struct Edge {
  int i = 0;  // 1-based, i < j
  int j = 0;
  double w = 0.0;
  bool operator==(const Edge&) const = default;
};

/// Undirected weighted graph with 1-based vertex labels.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  /// Validates 1 <= i < j <= n, no duplicates, finite weights. Edges given as (j, i) are swapped.
  WeightedGraph(int n_nodes, std::vector<Edge> edges);

  int n_nodes() const { return n_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Ising energy sum w_ij s_i s_j of a basis index (qubit 1 is the most significant bit).
  double energy(std::size_t basis_index) const;

  /// Subgraph induced on vertices 1..n.
  WeightedGraph induced_prefix(int n) const;

  nlohmann::json to_json() const;
  static WeightedGraph from_json(const nlohmann::json& j);

  bool operator==(const WeightedGraph&) const = default;

 private:
  int n_nodes_ = 0;
  std::vector<Edge> edges_;
};

struct CutExtrema {
  double c_max = 0.0;
  double c_min = 0.0;
  std::vector<std::string> argmin_bitstrings;
};

/// Diagonal sum_(i,j) w_ij Z_i Z_j with bit 0 <-> spin +1.
ComplexMatrix build_cost_hamiltonian(const WeightedGraph& g);

/// Diagonal of the cost Hamiltonian as real numbers.
Eigen::VectorXd cost_diagonal(const WeightedGraph& g);

/// Sum of X over all qubits.
ComplexMatrix build_mixer(int n_qubits);

/// Exhaustive enumeration; n_nodes <= 24.
CutExtrema brute_force_extrema(const WeightedGraph& g);

/// (C_max - tr(H rho)) / (C_max - C_min).
double approximation_ratio(const ComplexMatrix& h, const ComplexMatrix& rho_p, const CutExtrema& ext);

struct SolutionProbability {
  std::string bitstring;  // for flip-grouped output, the representative whose first bit is 0
  double probability = 0.0;
  double energy = 0.0;
};

/// Diagonal populations labelled by bitstring. With group_flips, complementary strings are merged.
std::vector<SolutionProbability> solution_probabilities(const ComplexMatrix& rho_p,
                                                        bool group_flips = false,
                                                        const WeightedGraph* g = nullptr);

/// Probability mass on the minimizers of the cost.
double optimal_probability(const ComplexMatrix& rho_p, const WeightedGraph& g);

std::string bitstring(std::size_t index, int n_qubits);

namespace fixtures {
/// Four-vertex instance: non-crossing edges (1,2), (3,4); default per-edge assignment.
WeightedGraph four_node();
/// Eleven-vertex randomized weight table; vertex k+1 corresponds to Z_k.
WeightedGraph eleven_node_table();
/// Induced prefix of the eleven-vertex table.
WeightedGraph table_prefix(int n);
}  // namespace fixtures

}  // namespace nmqaoa
