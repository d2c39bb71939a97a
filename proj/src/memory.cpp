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

#include "nmqaoa/memory.hpp"

#include <atomic>
#include <cerrno>
#include <cstdlib>

#ifdef NMQAOA_TRACK_ALLOCATIONS
#include <malloc.h>

extern "C" {
void* __libc_malloc(std::size_t);
void __libc_free(void*);
void* __libc_calloc(std::size_t, std::size_t);
void* __libc_realloc(void*, std::size_t);
void* __libc_memalign(std::size_t, std::size_t);
}
#endif

namespace nmqaoa::memory {

namespace {
std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};

[[maybe_unused]] void on_alloc(void* p) {
#ifdef NMQAOA_TRACK_ALLOCATIONS
  if (p == nullptr) return;
  const std::size_t n = malloc_usable_size(p);
  const std::size_t now = g_current.fetch_add(n, std::memory_order_relaxed) + n;
  std::size_t prev = g_peak.load(std::memory_order_relaxed);
  while (now > prev && !g_peak.compare_exchange_weak(prev, now, std::memory_order_relaxed)) {
  }
#else
  (void)p;
#endif
}

[[maybe_unused]] void on_free(void* p) {
#ifdef NMQAOA_TRACK_ALLOCATIONS
  if (p == nullptr) return;
  g_current.fetch_sub(malloc_usable_size(p), std::memory_order_relaxed);
#else
  (void)p;
#endif
}
}  // namespace

bool tracking_enabled() {
#ifdef NMQAOA_TRACK_ALLOCATIONS
  return true;
#else
  return false;
#endif
}

std::size_t current_bytes() { return g_current.load(); }
std::size_t peak_bytes() { return g_peak.load(); }
void reset_peak() { g_peak.store(g_current.load()); }

PeakScope::PeakScope() : base_(current_bytes()) { reset_peak(); }

std::size_t PeakScope::peak() const {
  const std::size_t p = peak_bytes();
  return p > base_ ? p - base_ : 0;
}

}  // namespace nmqaoa::memory

#ifdef NMQAOA_TRACK_ALLOCATIONS
using nmqaoa::memory::on_alloc;
using nmqaoa::memory::on_free;

extern "C" {

void* malloc(std::size_t n) {
  void* p = __libc_malloc(n);
  on_alloc(p);
  return p;
}

void free(void* p) {
  on_free(p);
  __libc_free(p);
}

void* calloc(std::size_t a, std::size_t b) {
  void* p = __libc_calloc(a, b);
  on_alloc(p);
  return p;
}

void* realloc(void* old, std::size_t n) {
  const std::size_t before = old != nullptr ? malloc_usable_size(old) : 0;
  void* p = __libc_realloc(old, n);
  if (p == nullptr) return nullptr;  // old block untouched
  nmqaoa::memory::g_current.fetch_sub(before, std::memory_order_relaxed);
  on_alloc(p);
  return p;
}

void* memalign(std::size_t align, std::size_t n) {
  void* p = __libc_memalign(align, n);
  on_alloc(p);
  return p;
}

void* aligned_alloc(std::size_t align, std::size_t n) { return memalign(align, n); }

int posix_memalign(void** out, std::size_t align, std::size_t n) {
  void* p = memalign(align, n);
  if (p == nullptr) return ENOMEM;
  *out = p;
  return 0;
}

}  // extern "C"
#endif
