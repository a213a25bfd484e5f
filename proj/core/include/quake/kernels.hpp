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

#ifndef QUAKE_KERNELS_HPP_
#define QUAKE_KERNELS_HPP_

#include <cmath>
#include <numbers>
#include <span>

#include "quake/bitcore.hpp"
#include "quake/buffer.hpp"

namespace quake {

// Exponent-unit offset subtracted from c1 to center the first-order error
// band around 1 instead of leaving it one-sided.
inline constexpr double kCenteringBias = 0.0436;

// Fused affine transform for the approximate-exponential kernels.
//
// The kernels evaluate 2^(p*x + q) by assembling the bit pattern
//   z = c0*x + c1,   c0 = 2^mantissa_bits * p,
//                    c1 = 2^mantissa_bits * (bias + q - beta)
// where beta is the optional centering offset. Any fixed input scale and
// shift therefore costs nothing at runtime: it is folded into c0 and c1.
struct AffineCoeffs {
  float c0;
  float c1;
  // Derivation record. Not used in the hot path.
  float input_scale;   // p
  float input_shift;   // q
  bool bias_applied;
};

// Builds the fused coefficients for 2^(p*x + q). Throws std::invalid_argument
// for p == 0 (a degenerate, constant kernel).
AffineCoeffs coeffs_for(float p, float q, const FpFormat& fmt = kSingle,
                        bool centering_bias = false);

// e^x, 2^x and e^-x configurations.
AffineCoeffs natural_exp_coeffs(bool centering_bias = true);
AffineCoeffs base2_coeffs(bool centering_bias = false);
AffineCoeffs negated_natural_exp_coeffs(bool centering_bias = true);

// Quadratic mantissa-refinement coefficients. y_m = a0*a_m^2 + a1*a_m + a2
// replaces the first-order mantissa a_m = 1 + frac on [1, 2).
struct QuadCoeffs {
  float a0;
  float a1;
  float a2;

  // Endpoint-exact set: y_m hits 1 and 2 at a_m = 1 and 2, so the refined
  // kernel stays continuous and exact at integer exponents.
  static constexpr QuadCoeffs continuity() {
    return {1.0f / 3.0f, 0.0f, 2.0f / 3.0f};
  }
  // Grid-search optimum for worst-case relative error. Not endpoint-exact.
  static constexpr QuadCoeffs minimax() { return {0.33f, -0.017f, 0.68f}; }

  constexpr bool is_continuity_default() const {
    return a0 == 1.0f / 3.0f && a1 == 0.0f && a2 == 2.0f / 3.0f;
  }
};

// Saturation bounds in pre-transform input units. Inputs outside [lo, hi]
// are pinned to the corresponding edge so the assembled word always has a
// biased exponent in [1, 254]; NaN saturates to hi.
struct ClampRange {
  float lo;
  float hi;
};

// Widest range keeping p*x + q + bias within biased exponents [1, ~255).
// Derived from the affine algebra alone; a small interior margin absorbs
// the rounding of c0*x + c1 in single precision.
ClampRange default_clamp(float p, float q, const FpFormat& fmt = kSingle);

// Same bounds, but solved against the actual stored c0/c1 (which include
// the centering offset).
ClampRange clamp_for(const AffineCoeffs& c);

namespace detail {

inline float saturate(float x, const ClampRange& r) {
  // Comparisons are ordered so that NaN falls through the first select and
  // is caught by the second, landing on hi. Both compile to branch-free
  // min/max-style selects.
  const float t = x < r.lo ? r.lo : x;
  return t <= r.hi ? t : r.hi;
}

inline float quake_body(float x, float c0, float c1) {
  const float z = c0 * x + c1;
  return int_bits_as_float(static_cast<Word32>(convert_to_int(z)));
}

// y_m for the endpoint-exact default: one multiply, one add, one divide.
inline float refine_default(float am) { return (am * am + 2.0f) / 3.0f; }

// General three-coefficient path; two fused multiply-adds when the target
// has native ones, the plainly associated polynomial otherwise.
inline float refine_general(float am, const QuadCoeffs& a) {
#ifdef FP_FAST_FMAF
  return std::fmaf(std::fmaf(a.a0, am, a.a1), am, a.a2);
#else
  return a.a0 * am * am + a.a1 * am + a.a2;
#endif
}

template <typename Refine>
inline float quake2_body(float x, float c0, float c1, Refine refine) {
  const float z = c0 * x + c1;
  const Word32 zw = static_cast<Word32>(convert_to_int(z));
  // Mantissa of z re-homed to the [1, 2) binade.
  const float am = int_bits_as_float((zw & kMantissaMask) | kUnitExponentBits);
  const float ym = refine(am);
  // Join z's sign+exponent with y_m's mantissa. Plain integer addition (not
  // OR) lets y_m = 2.0 carry into the exponent and y_m < 1.0 borrow from it,
  // which keeps the assembly correct at both mantissa endpoints.
  const Word32 yw =
      (zw & kSignExponentMask) + float_bits_as_int(ym) - kUnitExponentBits;
  return int_bits_as_float(yw);
}

}  // namespace detail

// First-order kernel: clamp, affine transform, value-convert, reinterpret.
inline float quake(float x, const AffineCoeffs& c, const ClampRange& r) {
  return detail::quake_body(detail::saturate(x, r), c.c0, c.c1);
}

// Second-order kernel: first-order word plus quadratic mantissa refinement.
inline float quake2(float x, const AffineCoeffs& c, const QuadCoeffs& a,
                    const ClampRange& r) {
  const float u = detail::saturate(x, r);
  if (a.is_continuity_default()) {
    return detail::quake2_body(u, c.c0, c.c1, detail::refine_default);
  }
  return detail::quake2_body(u, c.c0, c.c1,
                             [&a](float am) { return detail::refine_general(am, a); });
}

// Convenience overloads with the clamp derived from the coefficients.
float quake(float x, const AffineCoeffs& c);
float quake2(float x, const AffineCoeffs& c,
             const QuadCoeffs& a = QuadCoeffs::continuity());

// Elementwise buffer variants. Bit-identical to the scalar kernels element
// by element, independent of any internal work partitioning.
void quake_buffer(std::span<const float> xs, std::span<float> out,
                  const AffineCoeffs& c, const ClampRange& r);
void quake2_buffer(std::span<const float> xs, std::span<float> out,
                   const AffineCoeffs& c, const QuadCoeffs& a,
                   const ClampRange& r);
NumericBuffer quake_buffer(std::span<const float> xs, const AffineCoeffs& c,
                           const ClampRange& r);
NumericBuffer quake2_buffer(std::span<const float> xs, const AffineCoeffs& c,
                            const QuadCoeffs& a, const ClampRange& r);

}  // namespace quake

#endif  // QUAKE_KERNELS_HPP_
