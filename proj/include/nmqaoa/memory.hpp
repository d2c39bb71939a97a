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

#include <cstddef>

namespace nmqaoa::memory {

/// True when the allocator interposer is linked in and counting.
bool tracking_enabled();

/// Bytes currently allocated through malloc and friends.
std::size_t current_bytes();

/// High-water mark since the last reset_peak().
std::size_t peak_bytes();

/// Sets the high-water mark to the current allocation level.
void reset_peak();

/// Scoped peak measurement: peak() reports bytes above the level at construction.
class PeakScope {
 public:
  PeakScope();
  std::size_t peak() const;

 private:
  std::size_t base_;
};

}  // namespace nmqaoa::memory
