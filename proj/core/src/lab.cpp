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

#include "quake/lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "quake/parallel.hpp"

namespace quake::lab {

namespace {

using std::numbers::ln2;
using std::numbers::log2e;

// Prebuilt evaluation state so sweeps do not rebuild coefficients per call.
struct Evaluator {
  KernelChoice kind;
  bool natural;
  AffineCoeffs c{};
  ClampRange r{};
  QuadCoeffs a{};
  bool default_quad = true;

  explicit Evaluator(const ExpConfig& cfg)
      : kind(cfg.kind), natural(cfg.natural_base), a(cfg.quad) {
    if (kind != KernelChoice::Exact) {
      c = cfg.coeffs();
      r = clamp_for(c);
      default_quad = a.is_continuity_default();
    }
  }

  double operator()(float x) const {
    switch (kind) {
      case KernelChoice::Exact:
        return natural ? std::exp(static_cast<double>(x))
                       : std::exp2(static_cast<double>(x));
      case KernelChoice::Quake:
        return static_cast<double>(quake(x, c, r));
      case KernelChoice::Quake2:
      default:
        if (default_quad) {
          return static_cast<double>(detail::quake2_body(
              detail::saturate(x, r), c.c0, c.c1, detail::refine_default));
        }
        return static_cast<double>(quake2(x, c, a, r));
    }
  }

  double reference(float x) const {
    return natural ? std::exp(static_cast<double>(x))
                   : std::exp2(static_cast<double>(x));
  }
};

struct ChunkStat {
  double max = -1.0;
  float arg = 0.0f;
  double sum = 0.0;
  std::uint64_t n = 0;
};

// Runs the evaluator over inputs indexed by input_of, reducing per chunk;
// chunk results are combined in index order so the report is identical for
// any thread count.
template <typename InputOf>
void accumulate(const Evaluator& ev, std::uint64_t count, InputOf&& input_of,
                ChunkStat& total) {
  const std::size_t chunks = chunk_count(count);
  std::vector<ChunkStat> slots(chunks);
  parallel_indexed_chunks(count, [&](std::size_t ci, std::size_t begin,
                                     std::size_t end) {
    ChunkStat s;
    for (std::size_t i = begin; i < end; ++i) {
      const float x = input_of(static_cast<std::uint64_t>(i));
      if (std::isnan(x)) continue;
      const double approx = ev(x);
      const double exact = ev.reference(x);
      const double rel = std::abs(approx - exact) / exact;
      if (rel > s.max) {
        s.max = rel;
        s.arg = x;
      }
      s.sum += rel;
      ++s.n;
    }
    slots[ci] = s;
  });
  for (const ChunkStat& s : slots) {
    if (s.max > total.max) {
      total.max = s.max;
      total.arg = s.arg;
    }
    total.sum += s.sum;
    total.n += s.n;
  }
}

}  // namespace

float ExpConfig::input_scale() const {
  return natural_base ? static_cast<float>(log2e) : 1.0f;
}

AffineCoeffs ExpConfig::coeffs() const {
  return coeffs_for(input_scale(), 0.0f, kSingle, centering_bias);
}

ClampRange ExpConfig::clamp() const { return clamp_for(coeffs()); }

double ExpConfig::eval(float x) const { return Evaluator(*this)(x); }

double ExpConfig::reference(float x) const {
  return natural_base ? std::exp(static_cast<double>(x))
                      : std::exp2(static_cast<double>(x));
}

std::string ExpConfig::label() const {
  std::string s = kernel_name(kind);
  s += natural_base ? ":e" : ":2";
  if (kind != KernelChoice::Exact) {
    s += centering_bias ? ":bias" : ":nobias";
    if (kind == KernelChoice::Quake2 && !quad.is_continuity_default()) {
      s += ":custom-quad";
    }
  }
  return s;
}

ErrorReport sweep_error(const ExpConfig& cfg, const SweepSpec& spec) {
  if (!(spec.lo < spec.hi)) {
    throw std::invalid_argument("sweep_error: range is empty");
  }
  if (spec.uniform_samples < 10'000) {
    throw std::invalid_argument("sweep_error: need at least 10^4 samples");
  }
  const Evaluator ev(cfg);
  if (cfg.kind != KernelChoice::Exact) {
    const ClampRange r = ev.r;
    if (spec.lo < r.lo || spec.hi > r.hi) {
      throw std::invalid_argument("sweep_error: range exceeds clamp bounds");
    }
  }

  ChunkStat total;

  const double lo = spec.lo;
  const double step = (static_cast<double>(spec.hi) - lo) /
                      static_cast<double>(spec.uniform_samples - 1);
  accumulate(ev, spec.uniform_samples, [&](std::uint64_t i) {
    return static_cast<float>(lo + step * static_cast<double>(i));
  }, total);

  // Exhaustive walk over one mantissa period of the assembled word. The
  // approximation error is periodic in the fractional exponent, so this
  // pins the worst case at full mantissa resolution.
  if (cfg.kind != KernelChoice::Exact && spec.period_stride > 0) {
    const Word32 w0 = static_cast<Word32>(kSingle.bias) << kSingle.mantissa_bits;
    const std::uint64_t span = std::uint64_t{1} << kSingle.mantissa_bits;
    const std::uint64_t count = (span + spec.period_stride - 1) / spec.period_stride;
    const double c0 = ev.c.c0;
    const double c1 = ev.c.c1;
    accumulate(ev, count, [&](std::uint64_t i) {
      const double w = static_cast<double>(w0 + i * spec.period_stride);
      const double x = (w - c1) / c0;
      if (x < spec.lo || x > spec.hi) return std::nanf("");
      return static_cast<float>(x);
    }, total);
  }

  ErrorReport report;
  report.kernel = kernel_name(cfg.kind);
  report.lo = spec.lo;
  report.hi = spec.hi;
  report.samples = total.n;
  report.max_rel_err = total.max < 0.0 ? 0.0 : total.max;
  report.mean_rel_err = total.n == 0 ? 0.0 : total.sum / static_cast<double>(total.n);
  report.argmax_input = total.arg;
  return report;
}

std::size_t GridAxis::points() const {
  if (step <= 0.0 || hi < lo) return 0;
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
}

double GridAxis::at(std::size_t i) const { return lo + step * static_cast<double>(i); }

double quad_max_rel_err(double a0, double a1, double a2, std::size_t intervals) {
  double worst = 0.0;
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double am = 1.0 + static_cast<double>(i) / static_cast<double>(intervals);
    const double poly = (a0 * am + a1) * am + a2;
    const double exact = std::exp2(am - 1.0);
    const double rel = std::abs(poly - exact) / exact;
    if (rel > worst) worst = rel;
  }
  return worst;
}

GridSearchResult grid_search_quad(const GridSpec& spec) {
  const std::size_t n0 = spec.a0.points();
  const std::size_t n1 = spec.a1.points();
  const std::size_t n2 = spec.a2.points();
  if (n0 == 0 || n1 == 0 || n2 == 0) {
    throw std::invalid_argument("grid_search_quad: empty grid");
  }
  const std::size_t total = n0 * n1 * n2;

  const auto coeffs_at = [&](std::size_t flat) {
    const std::size_t i2 = flat % n2;
    const std::size_t i1 = (flat / n2) % n1;
    const std::size_t i0 = flat / (n1 * n2);
    return std::array<double, 3>{spec.a0.at(i0), spec.a1.at(i1), spec.a2.at(i2)};
  };

  // Coarse pass over every grid point, then a fine re-evaluation of the
  // best candidates. The coarse sampling misjudges the true maximum by
  // well under the error contrast between neighboring grid points.
  std::vector<double> coarse(total);
  parallel_chunks(total, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto a = coeffs_at(i);
      coarse[i] = quad_max_rel_err(a[0], a[1], a[2], 512);
    }
  });

  const std::size_t keep = std::min<std::size_t>(total, 2048);
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                    order.end(), [&](std::size_t lhs, std::size_t rhs) {
                      if (coarse[lhs] != coarse[rhs]) return coarse[lhs] < coarse[rhs];
                      return lhs < rhs;
                    });

  std::size_t best_index = order[0];
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < keep; ++k) {
    const auto a = coeffs_at(order[k]);
    const double err = quad_max_rel_err(a[0], a[1], a[2], 1u << 16);
    if (err < best_err || (err == best_err && order[k] < best_index)) {
      best_err = err;
      best_index = order[k];
    }
  }

  const auto a = coeffs_at(best_index);
  GridSearchResult result;
  result.best = QuadCoeffs{static_cast<float>(a[0]), static_cast<float>(a[1]),
                           static_cast<float>(a[2])};
  // Independent dense re-sweep of the winner.
  result.best_max_rel_err = quad_max_rel_err(a[0], a[1], a[2], 1u << 20);
  result.step_a0 = spec.a0.step;
  result.step_a1 = spec.a1.step;
  result.step_a2 = spec.a2.step;
  result.points_searched = total;
  return result;
}

ContinuityReport continuity_probe(const ExpConfig& cfg, int k_lo, int k_hi) {
  if (cfg.kind == KernelChoice::Exact) return {};
  if (k_hi < k_lo) {
    throw std::invalid_argument("continuity_probe: empty range");
  }
  if (kSingle.bias + k_lo < 2 || kSingle.bias + k_hi > 254) {
    throw std::invalid_argument("continuity_probe: range exceeds the normal band");
  }
  const Evaluator ev(cfg);
  if (ev.c.c0 <= 0.0f) {
    throw std::invalid_argument("continuity_probe: requires a positive input scale");
  }

  // The affine stage is continuous and monotone, so any discontinuity
  // lives in the word -> refined-word map. Probe it at full mantissa
  // resolution: the last assembled word below each wraparound against the
  // word at the wraparound. Input-space probing cannot do this - adjacent
  // representable inputs straddle many mantissa units of z once c0*x + c1
  // grows past 2^30.
  const auto value_of_word = [&](Word32 zw) {
    if (cfg.kind == KernelChoice::Quake) {
      return static_cast<double>(int_bits_as_float(zw));
    }
    const float am = int_bits_as_float((zw & kMantissaMask) | kUnitExponentBits);
    const float ym = ev.default_quad ? detail::refine_default(am)
                                     : detail::refine_general(am, ev.a);
    const Word32 yw =
        (zw & kSignExponentMask) + float_bits_as_int(ym) - kUnitExponentBits;
    return static_cast<double>(int_bits_as_float(yw));
  };

  const double c0 = ev.c.c0;
  const double c1 = ev.c.c1;
  ContinuityReport report;
  for (int k = k_lo; k <= k_hi; ++k) {
    const Word32 boundary = static_cast<Word32>(kSingle.bias + k)
                            << kSingle.mantissa_bits;
    const double at_boundary = value_of_word(boundary);
    const double just_below = value_of_word(boundary - 1u);
    const double jump = std::abs(at_boundary - just_below) / at_boundary;
    if (jump > report.worst_jump) {
      report.worst_jump = jump;
      // Input that assembles to the boundary word, for the report.
      report.at = static_cast<float>((static_cast<double>(boundary) - c1) / c0);
    }
  }
  return report;
}

BiasSearchResult bias_reoptimize(const ExpConfig& cfg, double beta_lo,
                                 double beta_hi) {
  if (cfg.kind == KernelChoice::Exact) {
    throw std::invalid_argument("bias_reoptimize: nothing to optimize for exact");
  }
  if (!(beta_lo < beta_hi)) {
    throw std::invalid_argument("bias_reoptimize: empty search interval");
  }

  // Fixed sample grid over one mantissa period, with the reference values
  // precomputed once; the objective then only re-runs the kernel.
  const double p = cfg.input_scale();
  const double period = 1.0 / p;
  constexpr std::size_t kSamples = (1u << 19) + 1;
  std::vector<float> xs(kSamples);
  std::vector<double> refs(kSamples);
  for (std::size_t i = 0; i < kSamples; ++i) {
    const float x = static_cast<float>(period * static_cast<double>(i) /
                                       static_cast<double>(kSamples - 1));
    xs[i] = x;
    refs[i] = cfg.reference(x);
  }

  const double scale = std::ldexp(1.0, kSingle.mantissa_bits);
  const auto objective = [&](double beta) {
    AffineCoeffs c;
    c.c0 = static_cast<float>(scale * p);
    c.c1 = static_cast<float>(scale * (static_cast<double>(kSingle.bias) - beta));
    c.input_scale = static_cast<float>(p);
    c.input_shift = 0.0f;
    c.bias_applied = beta != 0.0;
    const ClampRange r = clamp_for(c);
    double worst = 0.0;
    if (cfg.kind == KernelChoice::Quake) {
      for (std::size_t i = 0; i < kSamples; ++i) {
        const double approx = quake(xs[i], c, r);
        const double rel = std::abs(approx - refs[i]) / refs[i];
        if (rel > worst) worst = rel;
      }
    } else {
      for (std::size_t i = 0; i < kSamples; ++i) {
        const double approx = quake2(xs[i], c, cfg.quad, r);
        const double rel = std::abs(approx - refs[i]) / refs[i];
        if (rel > worst) worst = rel;
      }
    }
    return worst;
  };

  constexpr double kGolden = 0.6180339887498949;
  double a = beta_lo;
  double b = beta_hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (b - a > 1e-6) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = objective(x2);
    }
  }

  BiasSearchResult result;
  const double beta = 0.5 * (a + b);
  result.beta = static_cast<float>(beta);
  result.max_rel_err = objective(beta);
  result.near_reference_bias = std::abs(beta - kCenteringBias) <= 0.0035;
  return result;
}

}  // namespace quake::lab
