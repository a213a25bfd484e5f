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

#ifndef QUAKE_BENCH_HPP_
#define QUAKE_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "quake/nonlin.hpp"

namespace quake::bench {

enum class Workload { SoftmaxMatrix, GeluVector, ExpVector, LogisticVector };

const char* workload_name(Workload w);
std::optional<Workload> workload_from_name(std::string_view name);

struct BenchConfig {
  Workload workload = Workload::ExpVector;
  // Shape: rows x cols for the softmax matrix, n for vector workloads.
  std::size_t rows = 4096;
  std::size_t cols = 4096;
  std::size_t n = 260'000;
  KernelChoice kernel = KernelChoice::Quake;
  int warmup_iters = 2;
  int measured_iters = 10;
  bool fused = true;
  float temperature = 1.0f;
  std::optional<bool> centering_bias;  // unset = per-kernel default
  std::uint64_t seed = 42;
};

struct BenchReport {
  std::string workload;
  std::string kernel;
  bool fused = true;
  std::size_t elements = 0;
  int warmup_iters = 0;
  int measured_iters = 0;
  double mean_seconds = 0.0;
  double min_seconds = 0.0;
  double throughput_eps = 0.0;  // elements per second, from the mean
  double speedup_vs_exact = 1.0;
  double checksum = 0.0;
  // Environment fingerprint.
  unsigned threads = 1;
  std::string build;
  bool autovec = true;
  std::uint64_t seed = 0;
};

// Fills the workload with seeded values, runs the warmups, measures the
// wall time per iteration, and times the Exact baseline through the same
// loop scaffolding for the speedup ratio. Measurement is single-threaded.
// The outputs are checksummed each iteration; a checksum drift across
// iterations raises std::runtime_error.
BenchReport run_bench(const BenchConfig& cfg);

struct AblationReport {
  BenchReport fused;
  BenchReport unfused;
  double fusion_speedup = 1.0;       // unfused mean / fused mean
  double max_rel_divergence = 0.0;   // elementwise fused-vs-unfused drift
};

// Paired fused/unfused run for softmax_matrix and gelu_vector: once with
// the affine transform folded into c0/c1, once with an explicit
// pre-transform pass feeding the plain exponential kernel.
AblationReport fusion_ablation(const BenchConfig& cfg);

}  // namespace quake::bench

#endif  // QUAKE_BENCH_HPP_
