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

#include "quake/kernels.hpp"

#include <algorithm>
#include <stdexcept>

#include "quake/parallel.hpp"

namespace quake {

AffineCoeffs coeffs_for(float p, float q, const FpFormat& fmt,
                        bool centering_bias) {
  if (p == 0.0f) {
    throw std::invalid_argument("coeffs_for: input scale p must be non-zero");
  }
  const double scale = std::ldexp(1.0, fmt.mantissa_bits);
  const double beta = centering_bias ? kCenteringBias : 0.0;
  AffineCoeffs c;
  c.c0 = static_cast<float>(scale * static_cast<double>(p));
  c.c1 = static_cast<float>(scale *
                            (static_cast<double>(fmt.bias) + static_cast<double>(q) - beta));
  c.input_scale = p;
  c.input_shift = q;
  c.bias_applied = centering_bias;
  return c;
}

AffineCoeffs natural_exp_coeffs(bool centering_bias) {
  return coeffs_for(static_cast<float>(std::numbers::log2e), 0.0f, kSingle,
                    centering_bias);
}

AffineCoeffs base2_coeffs(bool centering_bias) {
  return coeffs_for(1.0f, 0.0f, kSingle, centering_bias);
}

AffineCoeffs negated_natural_exp_coeffs(bool centering_bias) {
  return coeffs_for(static_cast<float>(-std::numbers::log2e), 0.0f, kSingle,
                    centering_bias);
}

namespace {

// Interior margins in biased-exponent units. They keep the rounded
// c0*x + c1 strictly inside [1*2^lm, 255*2^lm) so the assembled word can
// neither land in the denormal band nor overflow into the Inf pattern.
constexpr double kLowExponentEdge = 1.01;
constexpr double kHighExponentEdge = 254.99;

ClampRange solve_clamp(double c0, double c1, int mantissa_bits) {
  const double scale = std::ldexp(1.0, mantissa_bits);
  double a = (kLowExponentEdge * scale - c1) / c0;
  double b = (kHighExponentEdge * scale - c1) / c0;
  if (a > b) std::swap(a, b);
  return {static_cast<float>(a), static_cast<float>(b)};
}

}  // namespace

ClampRange default_clamp(float p, float q, const FpFormat& fmt) {
  if (p == 0.0f) {
    throw std::invalid_argument("default_clamp: input scale p must be non-zero");
  }
  const double scale = std::ldexp(1.0, fmt.mantissa_bits);
  const double c0 = scale * static_cast<double>(p);
  const double c1 = scale * (static_cast<double>(fmt.bias) + static_cast<double>(q));
  return solve_clamp(c0, c1, fmt.mantissa_bits);
}

ClampRange clamp_for(const AffineCoeffs& c) {
  return solve_clamp(static_cast<double>(c.c0), static_cast<double>(c.c1),
                     kSingle.mantissa_bits);
}

float quake(float x, const AffineCoeffs& c) { return quake(x, c, clamp_for(c)); }

float quake2(float x, const AffineCoeffs& c, const QuadCoeffs& a) {
  return quake2(x, c, a, clamp_for(c));
}

void quake_buffer(std::span<const float> xs, std::span<float> out,
                  const AffineCoeffs& c, const ClampRange& r) {
  if (out.size() != xs.size()) {
    throw std::invalid_argument("quake_buffer: output size mismatch");
  }
  parallel_chunks(xs.size(), [&](std::size_t begin, std::size_t end) {
    const float c0 = c.c0;
    const float c1 = c.c1;
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = detail::quake_body(detail::saturate(xs[i], r), c0, c1);
    }
  });
}

void quake2_buffer(std::span<const float> xs, std::span<float> out,
                   const AffineCoeffs& c, const QuadCoeffs& a,
                   const ClampRange& r) {
  if (out.size() != xs.size()) {
    throw std::invalid_argument("quake2_buffer: output size mismatch");
  }
  // Hoist the coefficient-set dispatch out of the element loop.
  if (a.is_continuity_default()) {
    parallel_chunks(xs.size(), [&](std::size_t begin, std::size_t end) {
      const float c0 = c.c0;
      const float c1 = c.c1;
      for (std::size_t i = begin; i < end; ++i) {
        out[i] = detail::quake2_body(detail::saturate(xs[i], r), c0, c1,
                                     detail::refine_default);
      }
    });
  } else {
    parallel_chunks(xs.size(), [&](std::size_t begin, std::size_t end) {
      const float c0 = c.c0;
      const float c1 = c.c1;
      for (std::size_t i = begin; i < end; ++i) {
        out[i] = detail::quake2_body(
            detail::saturate(xs[i], r), c0, c1,
            [&a](float am) { return detail::refine_general(am, a); });
      }
    });
  }
}

NumericBuffer quake_buffer(std::span<const float> xs, const AffineCoeffs& c,
                           const ClampRange& r) {
  NumericBuffer out(xs.size());
  quake_buffer(xs, out, c, r);
  return out;
}

NumericBuffer quake2_buffer(std::span<const float> xs, const AffineCoeffs& c,
                            const QuadCoeffs& a, const ClampRange& r) {
  NumericBuffer out(xs.size());
  quake2_buffer(xs, out, c, a, r);
  return out;
}

}  // namespace quake
