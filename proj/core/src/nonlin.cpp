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

#include "quake/nonlin.hpp"

#include <algorithm>
#include <stdexcept>

#include "quake/parallel.hpp"

namespace quake {

namespace {

using std::numbers::ln2;
using std::numbers::log2e;

struct ExpKernel {
  AffineCoeffs coeffs;
  ClampRange clamp;
};

const ExpKernel& negated_exp_kernel(bool centering_bias) {
  static const ExpKernel biased{negated_natural_exp_coeffs(true),
                                clamp_for(negated_natural_exp_coeffs(true))};
  static const ExpKernel plain{negated_natural_exp_coeffs(false),
                               clamp_for(negated_natural_exp_coeffs(false))};
  return centering_bias ? biased : plain;
}

float row_max_checked(std::span<const float> v) {
  if (v.empty()) {
    throw std::invalid_argument("softmax: empty row");
  }
  float m = v[0];
  for (const float x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("softmax: non-finite input");
    }
    m = x > m ? x : m;
  }
  return m;
}

// Two-pass row body shared by all kernels: exponentiate and accumulate,
// then divide by the sum.
template <typename ExpFn>
void softmax_row_with(std::span<const float> v, std::span<float> out,
                      ExpFn&& exp_at) {
  float sum = 0.0f;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const float y = exp_at(v[i]);
    out[i] = y;
    sum += y;
  }
  for (std::size_t i = 0; i < v.size(); ++i) out[i] /= sum;
}

void softmax_row_unchecked(std::span<const float> v, float m,
                           const SoftmaxParams& params, KernelChoice kernel,
                           std::span<float> out) {
  const float t = params.temperature;
  if (kernel == KernelChoice::Exact) {
    softmax_row_with(v, out,
                     [&](float x) { return std::exp(t * (x - m)); });
    return;
  }

  // Temperature and max-subtraction fused into the kernel constants:
  //   c0 = 2^23 * t / ln2,  c1 = (bias - beta) * 2^23 - c0 * m.
  // The low clamp pins c0*x + c1 at biased exponent 1, keeping every
  // exponentiated element a positive float.
  const double scale = std::ldexp(1.0, kSingle.mantissa_bits);
  const double beta =
      resolve_centering_bias(kernel, params.centering_bias) ? kCenteringBias : 0.0;
  const float c0 = static_cast<float>(scale * static_cast<double>(t) * log2e);
  const float c1 = static_cast<float>(
      scale * (static_cast<double>(kSingle.bias) - beta) -
      static_cast<double>(c0) * static_cast<double>(m));
  const float v_min =
      static_cast<float>(static_cast<double>(m) - 126.0 * ln2 / static_cast<double>(t));

  if (kernel == KernelChoice::Quake) {
    softmax_row_with(v, out, [&](float x) {
      const float u = x > v_min ? x : v_min;
      return detail::quake_body(u, c0, c1);
    });
    return;
  }

  if (params.quad.is_continuity_default()) {
    softmax_row_with(v, out, [&](float x) {
      const float u = x > v_min ? x : v_min;
      return detail::quake2_body(u, c0, c1, detail::refine_default);
    });
  } else {
    const QuadCoeffs a = params.quad;
    softmax_row_with(v, out, [&](float x) {
      const float u = x > v_min ? x : v_min;
      return detail::quake2_body(
          u, c0, c1, [&a](float am) { return detail::refine_general(am, a); });
    });
  }
}

}  // namespace

const char* kernel_name(KernelChoice k) {
  switch (k) {
    case KernelChoice::Exact:
      return "exact";
    case KernelChoice::Quake:
      return "quake";
    case KernelChoice::Quake2:
      return "quake2";
  }
  return "unknown";
}

GeluConstants GeluConstants::defaults() {
  constexpr double kappa = 0.044715;
  const double root2_over_pi = std::sqrt(2.0 / std::numbers::pi);
  GeluConstants g;
  g.kappa = static_cast<float>(kappa);
  g.root2_over_pi = static_cast<float>(root2_over_pi);
  g.fused_scale = static_cast<float>(2.0 * kappa * root2_over_pi);
  g.inverse_kappa = static_cast<float>(1.0 / kappa);
  return g;
}

void softmax_row(std::span<const float> v, const SoftmaxParams& params,
                 KernelChoice kernel, std::span<float> out) {
  if (out.size() != v.size()) {
    throw std::invalid_argument("softmax_row: output size mismatch");
  }
  if (!(params.temperature > 0.0f)) {
    throw std::invalid_argument("softmax_row: temperature must be positive");
  }
  const float m = row_max_checked(v);
  softmax_row_unchecked(v, m, params, kernel, out);
}

NumericBuffer softmax_row(std::span<const float> v, const SoftmaxParams& params,
                          KernelChoice kernel) {
  NumericBuffer out(v.size());
  softmax_row(v, params, kernel, out);
  return out;
}

void softmax_rows(std::span<const float> matrix, std::size_t cols,
                  const SoftmaxParams& params, KernelChoice kernel,
                  std::span<float> out) {
  const MatrixView view{matrix, cols};
  if (!view.well_formed()) {
    throw std::invalid_argument("softmax_rows: length not divisible by cols");
  }
  if (out.size() != matrix.size()) {
    throw std::invalid_argument("softmax_rows: output size mismatch");
  }
  if (!(params.temperature > 0.0f)) {
    throw std::invalid_argument("softmax_rows: temperature must be positive");
  }
  const std::size_t rows = view.rows();
  // Validate everything up front so worker threads never throw.
  std::vector<float> maxes(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    maxes[r] = row_max_checked(view.row(r));
  }
  const std::size_t row_grain =
      std::max<std::size_t>(1, parallel_grain_elements() / cols);
  parallel_chunks(rows, row_grain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      softmax_row_unchecked(view.row(r), maxes[r], params, kernel,
                            out.subspan(r * cols, cols));
    }
  });
}

NumericBuffer softmax_rows(std::span<const float> matrix, std::size_t cols,
                           const SoftmaxParams& params, KernelChoice kernel) {
  NumericBuffer out(matrix.size());
  softmax_rows(matrix, cols, params, kernel, out);
  return out;
}

float logistic(float x, KernelChoice kernel, std::optional<bool> centering_bias) {
  if (kernel == KernelChoice::Exact) {
    return 1.0f / (1.0f + std::exp(-x));
  }
  const ExpKernel& k =
      negated_exp_kernel(resolve_centering_bias(kernel, centering_bias));
  const float e = kernel == KernelChoice::Quake
                      ? quake(x, k.coeffs, k.clamp)
                      : quake2(x, k.coeffs, QuadCoeffs::continuity(), k.clamp);
  return 1.0f / (1.0f + e);
}

void logistic_buffer(std::span<const float> xs, std::span<float> out,
                     KernelChoice kernel, std::optional<bool> centering_bias) {
  if (out.size() != xs.size()) {
    throw std::invalid_argument("logistic_buffer: output size mismatch");
  }
  if (kernel == KernelChoice::Exact) {
    parallel_chunks(xs.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        out[i] = 1.0f / (1.0f + std::exp(-xs[i]));
      }
    });
    return;
  }
  const ExpKernel k =
      negated_exp_kernel(resolve_centering_bias(kernel, centering_bias));
  if (kernel == KernelChoice::Quake) {
    parallel_chunks(xs.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const float e =
            detail::quake_body(detail::saturate(xs[i], k.clamp), k.coeffs.c0, k.coeffs.c1);
        out[i] = 1.0f / (1.0f + e);
      }
    });
  } else {
    parallel_chunks(xs.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const float e =
            detail::quake2_body(detail::saturate(xs[i], k.clamp), k.coeffs.c0,
                                k.coeffs.c1, detail::refine_default);
        out[i] = 1.0f / (1.0f + e);
      }
    });
  }
}

namespace {

// Kernel for exp(-fused_scale * u) with fused_scale folded into c0.
const ExpKernel& gelu_exp_kernel(bool centering_bias) {
  static const ExpKernel biased = [] {
    const GeluConstants g = GeluConstants::defaults();
    const AffineCoeffs c = coeffs_for(
        static_cast<float>(-log2e * static_cast<double>(g.fused_scale)), 0.0f,
        kSingle, true);
    return ExpKernel{c, clamp_for(c)};
  }();
  static const ExpKernel plain = [] {
    const GeluConstants g = GeluConstants::defaults();
    const AffineCoeffs c = coeffs_for(
        static_cast<float>(-log2e * static_cast<double>(g.fused_scale)), 0.0f,
        kSingle, false);
    return ExpKernel{c, clamp_for(c)};
  }();
  return centering_bias ? biased : plain;
}

inline float gelu_inner(float x, const GeluConstants& g) {
  // u = x * (1/kappa + x^2); one fused multiply-add where native.
#ifdef FP_FAST_FMAF
  return x * std::fmaf(x, x, g.inverse_kappa);
#else
  return x * (x * x + g.inverse_kappa);
#endif
}

}  // namespace

float gelu(float x, KernelChoice kernel, std::optional<bool> centering_bias) {
  static const GeluConstants g = GeluConstants::defaults();
  if (kernel == KernelChoice::Exact) {
    return 0.5f * x *
           (1.0f + std::tanh(g.root2_over_pi * (x + g.kappa * x * x * x)));
  }
  const ExpKernel& k =
      gelu_exp_kernel(resolve_centering_bias(kernel, centering_bias));
  const float u = gelu_inner(x, g);
  const float e = kernel == KernelChoice::Quake
                      ? quake(u, k.coeffs, k.clamp)
                      : quake2(u, k.coeffs, QuadCoeffs::continuity(), k.clamp);
  return x / (1.0f + e);
}

void gelu_buffer(std::span<const float> xs, std::span<float> out,
                 KernelChoice kernel, std::optional<bool> centering_bias) {
  if (out.size() != xs.size()) {
    throw std::invalid_argument("gelu_buffer: output size mismatch");
  }
  static const GeluConstants g = GeluConstants::defaults();
  if (kernel == KernelChoice::Exact) {
    parallel_chunks(xs.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const float x = xs[i];
        out[i] = 0.5f * x *
                 (1.0f + std::tanh(g.root2_over_pi * (x + g.kappa * x * x * x)));
      }
    });
    return;
  }
  const ExpKernel k =
      gelu_exp_kernel(resolve_centering_bias(kernel, centering_bias));
  if (kernel == KernelChoice::Quake) {
    parallel_chunks(xs.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const float x = xs[i];
        const float e = detail::quake_body(
            detail::saturate(gelu_inner(x, g), k.clamp), k.coeffs.c0, k.coeffs.c1);
        out[i] = x / (1.0f + e);
      }
    });
  } else {
    parallel_chunks(xs.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const float x = xs[i];
        const float e = detail::quake2_body(
            detail::saturate(gelu_inner(x, g), k.clamp), k.coeffs.c0,
            k.coeffs.c1, detail::refine_default);
        out[i] = x / (1.0f + e);
      }
    });
  }
}

}  // namespace quake
