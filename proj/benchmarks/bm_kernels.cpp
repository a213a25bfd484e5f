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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "quake/kernels.hpp"
#include "quake/nonlin.hpp"

namespace {

std::vector<float> random_inputs(std::size_t n, float lo, float hi,
                                 std::uint64_t seed = 42) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

void BM_ExpQuake(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto in = random_inputs(n, -20.0f, 20.0f);
  std::vector<float> out(n);
  const auto c = quake::natural_exp_coeffs(true);
  const auto r = quake::clamp_for(c);
  for (auto _ : state) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = quake::quake(in[i], c, r);
    }
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(n) * state.iterations());
}
BENCHMARK(BM_ExpQuake)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_ExpQuake2(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto in = random_inputs(n, -20.0f, 20.0f);
  std::vector<float> out(n);
  const auto c = quake::natural_exp_coeffs(false);
  const auto r = quake::clamp_for(c);
  const auto a = quake::QuadCoeffs::continuity();
  for (auto _ : state) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = quake::quake2(in[i], c, a, r);
    }
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(n) * state.iterations());
}
BENCHMARK(BM_ExpQuake2)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_ExpLibm(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto in = random_inputs(n, -20.0f, 20.0f);
  std::vector<float> out(n);
  for (auto _ : state) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = std::exp(in[i]);
    }
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(n) * state.iterations());
}
BENCHMARK(BM_ExpLibm)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

template <quake::KernelChoice kKernel>
void BM_SoftmaxRow(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto in = random_inputs(n, -8.0f, 8.0f);
  std::vector<float> out(n);
  const quake::SoftmaxParams params;
  for (auto _ : state) {
    quake::softmax_row(in, params, kKernel, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(n) * state.iterations());
}
BENCHMARK(BM_SoftmaxRow<quake::KernelChoice::Exact>)->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(BM_SoftmaxRow<quake::KernelChoice::Quake>)->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(BM_SoftmaxRow<quake::KernelChoice::Quake2>)->Arg(1 << 10)->Arg(1 << 14);

template <quake::KernelChoice kKernel>
void BM_Gelu(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto in = random_inputs(n, -6.0f, 6.0f);
  std::vector<float> out(n);
  for (auto _ : state) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = quake::gelu(in[i], kKernel);
    }
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(n) * state.iterations());
}
BENCHMARK(BM_Gelu<quake::KernelChoice::Exact>)->Arg(1 << 16);
BENCHMARK(BM_Gelu<quake::KernelChoice::Quake>)->Arg(1 << 16);
BENCHMARK(BM_Gelu<quake::KernelChoice::Quake2>)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
