// Copyright 2026 The QuAKE Kernels Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUAKE_PARALLEL_HPP_
#define QUAKE_PARALLEL_HPP_

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace quake {

// Thread cap from the QUAKE_THREADS environment variable.
// 0 or unset means hardware concurrency.
unsigned effective_threads();

namespace detail {
inline constexpr std::size_t kParallelGrain = 1u << 15;
}

// Default chunk size, in elements.
inline constexpr std::size_t parallel_grain_elements() {
  return detail::kParallelGrain;
}

// Runs fn(begin, end) over fixed-size chunks of [0, n). Chunk boundaries
// depend only on n and the grain, never on the thread count, so any
// reduction that combines per-chunk results in chunk order is
// deterministic.
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t grain, Fn&& fn) {
  if (n == 0) return;
  if (grain == 0) grain = 1;
  const std::size_t chunks = (n + grain - 1) / grain;
  const unsigned threads = effective_threads();
  if (chunks <= 1 || threads <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      const std::size_t begin = c * grain;
      const std::size_t end = begin + grain < n ? begin + grain : n;
      fn(begin, end);
    }
  };
  const unsigned workers =
      static_cast<unsigned>(chunks < threads ? chunks : threads);
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

template <typename Fn>
void parallel_chunks(std::size_t n, Fn&& fn) {
  parallel_chunks(n, detail::kParallelGrain, static_cast<Fn&&>(fn));
}

// Indexed variant: fn(chunk_index, begin, end) with chunk_count(n) slots.
inline std::size_t chunk_count(std::size_t n) {
  return (n + detail::kParallelGrain - 1) / detail::kParallelGrain;
}

template <typename Fn>
void parallel_indexed_chunks(std::size_t n, Fn&& fn) {
  if (n == 0) return;
  const std::size_t grain = detail::kParallelGrain;
  const std::size_t chunks = chunk_count(n);
  const unsigned threads = effective_threads();
  if (chunks <= 1 || threads <= 1) {
    std::size_t c = 0;
    for (std::size_t begin = 0; begin < n; begin += grain, ++c) {
      const std::size_t end = begin + grain < n ? begin + grain : n;
      fn(c, begin, end);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      const std::size_t begin = c * grain;
      const std::size_t end = begin + grain < n ? begin + grain : n;
      fn(c, begin, end);
    }
  };
  const unsigned workers =
      static_cast<unsigned>(chunks < threads ? chunks : threads);
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace quake

#endif  // QUAKE_PARALLEL_HPP_
