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

#ifndef QUAKE_LAB_HPP_
#define QUAKE_LAB_HPP_

#include <cstdint>
#include <string>

#include "quake/kernels.hpp"
#include "quake/nonlin.hpp"

namespace quake::lab {

// One approximate-exponential configuration under test: which kernel,
// which base, whether c1 carries the centering offset, and (for the
// second-order kernel) which refinement coefficients.
struct ExpConfig {
  KernelChoice kind = KernelChoice::Quake;
  bool natural_base = true;  // e^x when true, 2^x when false
  bool centering_bias = true;
  QuadCoeffs quad = QuadCoeffs::continuity();

  float input_scale() const;       // p
  AffineCoeffs coeffs() const;
  ClampRange clamp() const;
  // Approximation result widened to double; Exact evaluates in double.
  double eval(float x) const;
  // Ground truth e^x or 2^x in double.
  double reference(float x) const;
  std::string label() const;
};

struct SweepSpec {
  float lo = -80.0f;
  float hi = 80.0f;
  // Uniform grid size over [lo, hi].
  std::uint64_t uniform_samples = 1u << 22;
  // Stride for the exhaustive walk over one mantissa period of the
  // assembled word; 0 disables the walk.
  std::uint32_t period_stride = 1;
};

// Dense relative-error report against the exact exponential.
struct ErrorReport {
  std::string kernel;
  float lo = 0.0f;
  float hi = 0.0f;
  std::uint64_t samples = 0;
  double max_rel_err = 0.0;
  double mean_rel_err = 0.0;
  float argmax_input = 0.0f;
};

// Evaluates |approx - exact| / exact over the uniform grid plus one
// exhaustive mantissa period. Deterministic for a fixed spec, regardless
// of the thread count. Throws on an empty range or undersized sample set.
ErrorReport sweep_error(const ExpConfig& cfg, const SweepSpec& spec);

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  std::size_t points() const;
  double at(std::size_t i) const;
};

struct GridSpec {
  GridAxis a0{0.30, 0.36, 0.001};
  GridAxis a1{-0.05, 0.02, 0.001};
  GridAxis a2{0.64, 0.72, 0.001};
};

struct GridSearchResult {
  QuadCoeffs best{};
  double best_max_rel_err = 0.0;
  double step_a0 = 0.0;
  double step_a1 = 0.0;
  double step_a2 = 0.0;
  std::uint64_t points_searched = 0;
};

// Worst-case relative error of the quadratic mantissa refinement
// a0*am^2 + a1*am + a2 against 2^(am-1) over am in [1, 2].
double quad_max_rel_err(double a0, double a1, double a2,
                        std::size_t intervals = 1u << 16);

// Exhaustive search over the grid for the coefficients minimizing
// quad_max_rel_err. Ties break toward the lexicographically first grid
// point, so the result is independent of the thread count.
GridSearchResult grid_search_quad(const GridSpec& spec);

struct ContinuityReport {
  double worst_jump = 0.0;
  float at = 0.0f;
};

// Relative jump across each mantissa-wraparound boundary for integer
// exponent steps k in [k_lo, k_hi]: compares the kernel one representable
// input below the boundary against the boundary itself.
ContinuityReport continuity_probe(const ExpConfig& cfg, int k_lo, int k_hi);

struct BiasSearchResult {
  float beta = 0.0f;
  double max_rel_err = 0.0;
  // Whether the search landed within 0.0035 of the canonical 0.0436.
  bool near_reference_bias = false;
};

// 1-D golden-section search for the centering offset minimizing the
// kernel's worst-case relative error over one mantissa period.
BiasSearchResult bias_reoptimize(const ExpConfig& cfg, double beta_lo = 0.0,
                                 double beta_hi = 0.1);

}  // namespace quake::lab

#endif  // QUAKE_LAB_HPP_
