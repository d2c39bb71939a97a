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

#include "nmqaoa/schedule.hpp"

#include <cmath>

#include "nmqaoa/error.hpp"

namespace nmqaoa {

ControlSchedule::ControlSchedule(std::vector<double> tau) : tau_(std::move(tau)) {
  if (tau_.size() % 2 != 0) throw InvalidArgument("schedule: length must be even (zeta, beta pairs)");
  for (double t : tau_) {
    if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("schedule: durations must be finite and >= 0");
  }
}

ControlSchedule ControlSchedule::from_pairs(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<double> tau;
  for (const auto& [z, b] : pairs) {
    tau.push_back(z);
    tau.push_back(b);
  }
  return ControlSchedule(tau);
}

ControlSchedule ControlSchedule::uniform(int depth, double value) {
  if (depth < 0) throw InvalidArgument("schedule: depth must be >= 0");
  return ControlSchedule(std::vector<double>(2 * static_cast<std::size_t>(depth), value));
}

int ControlSchedule::effective_depth() const {
  int d = 0;
  for (int j = 0; j < depth(); ++j) {
    if (zeta(j) + beta(j) > 0.0) ++d;
  }
  return d;
}

double ControlSchedule::l1_norm() const {
  double s = 0.0;
  for (double t : tau_) s += std::abs(t);
  return s;
}

}  // namespace nmqaoa
