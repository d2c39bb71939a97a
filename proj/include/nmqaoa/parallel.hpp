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
#include <functional>

namespace nmqaoa {

/// Worker count: `requested` if positive, else NMQAOA_WORKERS, else hardware concurrency.
int resolve_workers(int requested);

/// Runs body(i) for i in [0, n) on up to `workers` threads. Calls made from inside a running
/// parallel_for execute inline on the calling thread. The first exception thrown by any body is
/// rethrown after all workers have stopped.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace nmqaoa
