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

#include <vector>

#include "json.hpp"

namespace nmqaoa {

/// Interleaved control durations (zeta_1, beta_1, ..., zeta_P, beta_P) in ns.
/// zeta_j is spent under the cost Hamiltonian, beta_j under the mixer.
class ControlSchedule {
 public:
  ControlSchedule() = default;
  explicit ControlSchedule(std::vector<double> tau);
  static ControlSchedule from_pairs(const std::vector<std::pair<double, double>>& pairs);
  static ControlSchedule uniform(int depth, double value);

  const std::vector<double>& tau() const { return tau_; }
  std::size_t size() const { return tau_.size(); }
  int depth() const { return static_cast<int>(tau_.size() / 2); }
  double zeta(int j) const { return tau_.at(2 * static_cast<std::size_t>(j)); }
  double beta(int j) const { return tau_.at(2 * static_cast<std::size_t>(j) + 1); }

  /// Number of pairs with zeta + beta > 0.
  int effective_depth() const;
  double l1_norm() const;
  double total_duration() const { return l1_norm(); }

  nlohmann::json to_json() const { return tau_; }

  bool operator==(const ControlSchedule&) const = default;

 private:
  std::vector<double> tau_;
};

}  // namespace nmqaoa
