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

#ifndef QUAKE_NONLIN_HPP_
#define QUAKE_NONLIN_HPP_

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>

#include "quake/buffer.hpp"
#include "quake/kernels.hpp"

namespace quake {

// Which exponential evaluates the non-linearity. Exact is the platform's
// single-precision libm path; Quake and Quake2 are the bit-trick kernels.
enum class KernelChoice { Exact, Quake, Quake2 };

const char* kernel_name(KernelChoice k);

// Centering-offset default: on for the first-order kernel (it centers the
// one-sided secant error band), off for the second-order kernel (the
// refinement is already near-centered).
inline bool resolve_centering_bias(KernelChoice k, std::optional<bool> requested) {
  return requested.value_or(k == KernelChoice::Quake);
}

struct SoftmaxParams {
  float temperature = 1.0f;
  // Override for the centering offset in c1; unset picks the per-kernel
  // default.
  std::optional<bool> centering_bias;
  QuadCoeffs quad = QuadCoeffs::continuity();
};

// Constants of the sigmoid-form GELU
//   gelu(x) = x * sigmoid(fused_scale * x * (inverse_kappa + x^2)).
// fused_scale and inverse_kappa are derived from kappa in double precision
// and rounded once.
struct GeluConstants {
  float kappa;
  float root2_over_pi;
  float fused_scale;
  float inverse_kappa;

  static GeluConstants defaults();
};

// Row softmax: subtract the row max, scale by temperature, exponentiate,
// normalize by the sum. The temperature and max-subtraction fold into the
// kernel's c0/c1, so the approximate paths pay one fused multiply-add per
// element before the bit assembly.
//
// Rejects empty rows and non-finite inputs.
void softmax_row(std::span<const float> v, const SoftmaxParams& params,
                 KernelChoice kernel, std::span<float> out);
NumericBuffer softmax_row(std::span<const float> v, const SoftmaxParams& params,
                          KernelChoice kernel);

// Independent row-wise softmax over a row-major matrix. Rows may be
// processed on distinct threads; results never depend on the partition.
void softmax_rows(std::span<const float> matrix, std::size_t cols,
                  const SoftmaxParams& params, KernelChoice kernel,
                  std::span<float> out);
NumericBuffer softmax_rows(std::span<const float> matrix, std::size_t cols,
                           const SoftmaxParams& params, KernelChoice kernel);

// Logistic sigmoid 1 / (1 + e^-x). The negation is folded into c0.
float logistic(float x, KernelChoice kernel,
               std::optional<bool> centering_bias = std::nullopt);
void logistic_buffer(std::span<const float> xs, std::span<float> out,
                     KernelChoice kernel,
                     std::optional<bool> centering_bias = std::nullopt);

// Sigmoid-form GELU. The constant scale in front of the sigmoid argument is
// folded into the kernel's c0; the inner polynomial costs one multiply and
// one fused multiply-add per element.
float gelu(float x, KernelChoice kernel,
           std::optional<bool> centering_bias = std::nullopt);
void gelu_buffer(std::span<const float> xs, std::span<float> out,
                 KernelChoice kernel,
                 std::optional<bool> centering_bias = std::nullopt);

}  // namespace quake

#endif  // QUAKE_NONLIN_HPP_
