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

#ifndef QUAKE_BITCORE_HPP_
#define QUAKE_BITCORE_HPP_

#include <bit>
#include <cstdint>

namespace quake {

// Carrier for a raw IEEE-754 bit pattern. Reinterpretation between Word32
// and float is bit-exact in both directions, including NaN payloads.
using Word32 = std::uint32_t;

// Layout parameters of a binary floating-point format: exponent width,
// mantissa width, and exponent bias. Every kernel derives its constants
// from these three numbers. Only the 32-bit single-precision instance is
// exercised; other widths would need a different word carrier.
struct FpFormat {
  int exponent_bits;
  int mantissa_bits;
  int bias;

  static constexpr FpFormat single() { return {8, 23, 127}; }

  // bias = 2^(exponent_bits-1) - 1 for standard interchange formats.
  constexpr bool standard_bias() const {
    return bias == (1 << (exponent_bits - 1)) - 1;
  }
  constexpr Word32 mantissa_mask() const {
    return (Word32{1} << mantissa_bits) - 1u;
  }
  constexpr Word32 sign_exponent_mask() const { return ~mantissa_mask(); }
  // Bit pattern of 1.0: biased exponent equal to the bias, mantissa zero.
  constexpr Word32 unit_exponent_bits() const {
    return static_cast<Word32>(bias) << mantissa_bits;
  }
};

inline constexpr FpFormat kSingle = FpFormat::single();

// Single-precision mask constants, spelled out because the kernels use
// them as literals in the hot path.
inline constexpr Word32 kMantissaMask = 0x007FFFFFu;
inline constexpr Word32 kSignExponentMask = 0xFF800000u;
inline constexpr Word32 kUnitExponentBits = 0x3F800000u;

static_assert((kMantissaMask | kSignExponentMask) == 0xFFFFFFFFu);
static_assert((kMantissaMask & kSignExponentMask) == 0u);
static_assert(kSingle.mantissa_mask() == kMantissaMask);
static_assert(kSingle.unit_exponent_bits() == kUnitExponentBits);

// Reinterpret a float as its bit pattern. No value conversion.
inline Word32 float_bits_as_int(float x) { return std::bit_cast<Word32>(x); }

// Reinterpret a bit pattern as a float. Exact inverse of the above.
inline float int_bits_as_float(Word32 w) { return std::bit_cast<float>(w); }

// Value conversion, truncating toward zero. The argument must lie within
// the range of a 32-bit signed integer; the kernels guarantee this by
// clamping before the conversion.
inline std::int32_t convert_to_int(float x) {
  return static_cast<std::int32_t>(x);
}

// Mantissa field of a word under the given layout.
inline Word32 extract_mantissa_field(Word32 w, const FpFormat& fmt = kSingle) {
  return w & fmt.mantissa_mask();
}

}  // namespace quake

#endif  // QUAKE_BITCORE_HPP_
