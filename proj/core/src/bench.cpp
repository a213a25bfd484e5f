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

#include "quake/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace quake::bench {

namespace {

using std::numbers::log2e;

const char* build_label() {
#ifdef NDEBUG
  return "optimized";
#else
  return "debug";
#endif
}

bool autovec_enabled() {
#ifdef QUAKE_AUTOVEC_DISABLED
  return false;
#else
  return true;
#endif
}

std::pair<float, float> input_range(Workload w) {
  switch (w) {
    case Workload::SoftmaxMatrix:
      return {-8.0f, 8.0f};
    case Workload::GeluVector:
      return {-6.0f, 6.0f};
    case Workload::ExpVector:
      return {-20.0f, 20.0f};
    case Workload::LogisticVector:
    default:
      return {-12.0f, 12.0f};
  }
}

std::size_t element_count(const BenchConfig& cfg) {
  return cfg.workload == Workload::SoftmaxMatrix ? cfg.rows * cfg.cols : cfg.n;
}

// One single-threaded pass over the workload. The pass owns no state; it
// reads `in` and writes `out` (plus `scratch` for the unfused variants).
struct Pass {
  std::function<void()> run;
};

Pass make_softmax_pass(const BenchConfig& cfg, KernelChoice kernel, bool fused,
                       const NumericBuffer& in, NumericBuffer& out,
                       NumericBuffer& scratch) {
  // Hand-rolled row loops for every variant so the comparison isolates the
  // exponentiation and the affine handling, nothing else.
  const std::size_t rows = cfg.rows;
  const std::size_t cols = cfg.cols;
  const float t = cfg.temperature;
  const double scale = std::ldexp(1.0, kSingle.mantissa_bits);
  const bool bias = resolve_centering_bias(kernel, cfg.centering_bias);
  const double beta = bias ? kCenteringBias : 0.0;

  if (kernel == KernelChoice::Exact) {
    return {[=, &in, &out] {
      for (std::size_t row = 0; row < rows; ++row) {
        const float* v = in.data() + row * cols;
        float* y = out.data() + row * cols;
        float m = v[0];
        for (std::size_t i = 1; i < cols; ++i) m = v[i] > m ? v[i] : m;
        float sum = 0.0f;
        for (std::size_t i = 0; i < cols; ++i) {
          const float e = std::exp(t * (v[i] - m));
          y[i] = e;
          sum += e;
        }
        for (std::size_t i = 0; i < cols; ++i) y[i] /= sum;
      }
    }};
  }

  if (fused) {
    // Temperature and max-subtraction live inside c0/c1.
    const float c0 = static_cast<float>(scale * static_cast<double>(t) * log2e);
    return {[=, &in, &out] {
      for (std::size_t row = 0; row < rows; ++row) {
        const float* v = in.data() + row * cols;
        float* y = out.data() + row * cols;
        float m = v[0];
        for (std::size_t i = 1; i < cols; ++i) m = v[i] > m ? v[i] : m;
        const float c1 = static_cast<float>(
            scale * (static_cast<double>(kSingle.bias) - beta) -
            static_cast<double>(c0) * static_cast<double>(m));
        const float v_min = static_cast<float>(
            static_cast<double>(m) - 126.0 * std::numbers::ln2 / static_cast<double>(t));
        float sum = 0.0f;
        if (kernel == KernelChoice::Quake) {
          for (std::size_t i = 0; i < cols; ++i) {
            const float u = v[i] > v_min ? v[i] : v_min;
            const float e = detail::quake_body(u, c0, c1);
            y[i] = e;
            sum += e;
          }
        } else {
          for (std::size_t i = 0; i < cols; ++i) {
            const float u = v[i] > v_min ? v[i] : v_min;
            const float e = detail::quake2_body(u, c0, c1, detail::refine_default);
            y[i] = e;
            sum += e;
          }
        }
        for (std::size_t i = 0; i < cols; ++i) y[i] /= sum;
      }
    }};
  }

  // Unfused: explicit temperature scaling and max subtraction feeding the
  // plain natural-exponential kernel.
  const AffineCoeffs c = natural_exp_coeffs(bias);
  const ClampRange r = clamp_for(c);
  return {[=, &in, &out, &scratch] {
    for (std::size_t row = 0; row < rows; ++row) {
      const float* v = in.data() + row * cols;
      float* tmp = scratch.data();
      float* y = out.data() + row * cols;
      float m = v[0];
      for (std::size_t i = 1; i < cols; ++i) m = v[i] > m ? v[i] : m;
      for (std::size_t i = 0; i < cols; ++i) tmp[i] = t * (v[i] - m);
      float sum = 0.0f;
      if (kernel == KernelChoice::Quake) {
        for (std::size_t i = 0; i < cols; ++i) {
          const float e = detail::quake_body(detail::saturate(tmp[i], r), c.c0, c.c1);
          y[i] = e;
          sum += e;
        }
      } else {
        for (std::size_t i = 0; i < cols; ++i) {
          const float e = detail::quake2_body(detail::saturate(tmp[i], r), c.c0,
                                              c.c1, detail::refine_default);
          y[i] = e;
          sum += e;
        }
      }
      for (std::size_t i = 0; i < cols; ++i) y[i] /= sum;
    }
  }};
}

Pass make_gelu_pass(const BenchConfig& cfg, KernelChoice kernel, bool fused,
                    const NumericBuffer& in, NumericBuffer& out) {
  // Plain single-threaded loops throughout; the buffer APIs would shard
  // the work across threads and void the measurement contract.
  const std::size_t n = cfg.n;
  const GeluConstants g = GeluConstants::defaults();
  if (kernel == KernelChoice::Exact) {
    return {[=, &in, &out] {
      for (std::size_t i = 0; i < n; ++i) {
        const float x = in[i];
        out[i] = 0.5f * x *
                 (1.0f + std::tanh(g.root2_over_pi * (x + g.kappa * x * x * x)));
      }
    }};
  }

  const bool bias = resolve_centering_bias(kernel, cfg.centering_bias);
  if (fused) {
    // Constant scale folded into c0; only the inner polynomial remains.
    const AffineCoeffs c = coeffs_for(
        static_cast<float>(-log2e * static_cast<double>(g.fused_scale)), 0.0f,
        kSingle, bias);
    const ClampRange r = clamp_for(c);
    return {[=, &in, &out] {
      if (kernel == KernelChoice::Quake) {
        for (std::size_t i = 0; i < n; ++i) {
          const float x = in[i];
          const float u = x * (g.inverse_kappa + x * x);
          const float e = detail::quake_body(detail::saturate(u, r), c.c0, c.c1);
          out[i] = x / (1.0f + e);
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          const float x = in[i];
          const float u = x * (g.inverse_kappa + x * x);
          const float e = detail::quake2_body(detail::saturate(u, r), c.c0, c.c1,
                                              detail::refine_default);
          out[i] = x / (1.0f + e);
        }
      }
    }};
  }

  // Unfused: the sigmoid argument, constant scale included, is computed
  // explicitly per element and fed to the generic e^-x kernel.
  const AffineCoeffs c = negated_natural_exp_coeffs(bias);
  const ClampRange r = clamp_for(c);
  return {[=, &in, &out] {
    if (kernel == KernelChoice::Quake) {
      for (std::size_t i = 0; i < n; ++i) {
        const float x = in[i];
        const float w = g.fused_scale * x * (g.inverse_kappa + x * x);
        const float e = detail::quake_body(detail::saturate(w, r), c.c0, c.c1);
        out[i] = x / (1.0f + e);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const float x = in[i];
        const float w = g.fused_scale * x * (g.inverse_kappa + x * x);
        const float e = detail::quake2_body(detail::saturate(w, r), c.c0, c.c1,
                                            detail::refine_default);
        out[i] = x / (1.0f + e);
      }
    }
  }};
}

Pass make_exp_pass(const BenchConfig& cfg, KernelChoice kernel,
                   const NumericBuffer& in, NumericBuffer& out) {
  const std::size_t n = cfg.n;
  if (kernel == KernelChoice::Exact) {
    return {[=, &in, &out] {
      for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(in[i]);
    }};
  }
  const AffineCoeffs c = natural_exp_coeffs(resolve_centering_bias(kernel, cfg.centering_bias));
  const ClampRange r = clamp_for(c);
  return {[=, &in, &out] {
    if (kernel == KernelChoice::Quake) {
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = detail::quake_body(detail::saturate(in[i], r), c.c0, c.c1);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = detail::quake2_body(detail::saturate(in[i], r), c.c0, c.c1,
                                     detail::refine_default);
      }
    }
  }};
}

Pass make_logistic_pass(const BenchConfig& cfg, KernelChoice kernel,
                        const NumericBuffer& in, NumericBuffer& out) {
  const std::size_t n = cfg.n;
  if (kernel == KernelChoice::Exact) {
    return {[=, &in, &out] {
      for (std::size_t i = 0; i < n; ++i) out[i] = 1.0f / (1.0f + std::exp(-in[i]));
    }};
  }
  const AffineCoeffs c =
      negated_natural_exp_coeffs(resolve_centering_bias(kernel, cfg.centering_bias));
  const ClampRange r = clamp_for(c);
  return {[=, &in, &out] {
    if (kernel == KernelChoice::Quake) {
      for (std::size_t i = 0; i < n; ++i) {
        const float e = detail::quake_body(detail::saturate(in[i], r), c.c0, c.c1);
        out[i] = 1.0f / (1.0f + e);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const float e = detail::quake2_body(detail::saturate(in[i], r), c.c0, c.c1,
                                            detail::refine_default);
        out[i] = 1.0f / (1.0f + e);
      }
    }
  }};
}

Pass make_pass(const BenchConfig& cfg, KernelChoice kernel, bool fused,
               const NumericBuffer& in, NumericBuffer& out,
               NumericBuffer& scratch) {
  switch (cfg.workload) {
    case Workload::SoftmaxMatrix:
      return make_softmax_pass(cfg, kernel, fused, in, out, scratch);
    case Workload::GeluVector:
      return make_gelu_pass(cfg, kernel, fused, in, out);
    case Workload::ExpVector:
      return make_exp_pass(cfg, kernel, in, out);
    case Workload::LogisticVector:
    default:
      return make_logistic_pass(cfg, kernel, in, out);
  }
}

double checksum_of(const NumericBuffer& out) {
  double sum = 0.0;
  for (const float y : out) sum += static_cast<double>(y);
  return sum;
}

struct Timing {
  double mean_seconds = 0.0;
  double min_seconds = 0.0;
  double checksum = 0.0;
};

Timing measure(const Pass& pass, const NumericBuffer& out, int warmup,
               int measured) {
  using clock = std::chrono::steady_clock;
  for (int i = 0; i < warmup; ++i) pass.run();
  const double reference_checksum = checksum_of(out);

  Timing t;
  t.min_seconds = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (int i = 0; i < measured; ++i) {
    const auto t0 = clock::now();
    pass.run();
    const auto t1 = clock::now();
    if (checksum_of(out) != reference_checksum) {
      throw std::runtime_error("bench: checksum drift across iterations");
    }
    double dt = std::chrono::duration<double>(t1 - t0).count();
    if (dt <= 0.0) dt = 1e-9;  // zero-duration guard
    sum += dt;
    t.min_seconds = std::min(t.min_seconds, dt);
  }
  t.mean_seconds = sum / static_cast<double>(measured);
  t.checksum = reference_checksum;
  return t;
}

NumericBuffer fill_inputs(const BenchConfig& cfg) {
  const auto [lo, hi] = input_range(cfg.workload);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<float> dist(lo, hi);
  NumericBuffer in(element_count(cfg));
  for (float& x : in) x = dist(rng);
  return in;
}

void validate(const BenchConfig& cfg) {
  if (cfg.warmup_iters < 2) {
    throw std::invalid_argument("bench: at least two warm-up iterations required");
  }
  if (cfg.measured_iters < 10) {
    throw std::invalid_argument("bench: at least ten measured iterations required");
  }
  if (element_count(cfg) == 0) {
    throw std::invalid_argument("bench: empty workload");
  }
}

BenchReport report_from(const BenchConfig& cfg, const Timing& kernel_time,
                        const Timing& exact_time) {
  BenchReport r;
  r.workload = workload_name(cfg.workload);
  r.kernel = kernel_name(cfg.kernel);
  r.fused = cfg.fused;
  r.elements = element_count(cfg);
  r.warmup_iters = cfg.warmup_iters;
  r.measured_iters = cfg.measured_iters;
  r.mean_seconds = kernel_time.mean_seconds;
  r.min_seconds = kernel_time.min_seconds;
  r.throughput_eps = static_cast<double>(r.elements) / kernel_time.mean_seconds;
  r.speedup_vs_exact = exact_time.mean_seconds / kernel_time.mean_seconds;
  r.checksum = kernel_time.checksum;
  r.threads = 1;
  r.build = build_label();
  r.autovec = autovec_enabled();
  r.seed = cfg.seed;
  return r;
}

}  // namespace

const char* workload_name(Workload w) {
  switch (w) {
    case Workload::SoftmaxMatrix:
      return "softmax_matrix";
    case Workload::GeluVector:
      return "gelu_vector";
    case Workload::ExpVector:
      return "exp_vector";
    case Workload::LogisticVector:
      return "logistic_vector";
  }
  return "unknown";
}

std::optional<Workload> workload_from_name(std::string_view name) {
  if (name == "softmax_matrix") return Workload::SoftmaxMatrix;
  if (name == "gelu_vector") return Workload::GeluVector;
  if (name == "exp_vector") return Workload::ExpVector;
  if (name == "logistic_vector") return Workload::LogisticVector;
  return std::nullopt;
}

BenchReport run_bench(const BenchConfig& cfg) {
  validate(cfg);
  const NumericBuffer in = fill_inputs(cfg);
  NumericBuffer out(in.size());
  NumericBuffer scratch(cfg.workload == Workload::SoftmaxMatrix ? cfg.cols : 0);

  const Pass pass = make_pass(cfg, cfg.kernel, cfg.fused, in, out, scratch);
  const Timing kernel_time = measure(pass, out, cfg.warmup_iters, cfg.measured_iters);

  // Exact baseline through the same loop scaffolding. Re-measured even
  // when the kernel itself is Exact, so the self-comparison stays honest.
  const Pass exact_pass = make_pass(cfg, KernelChoice::Exact, cfg.fused, in, out, scratch);
  const Timing exact_time =
      measure(exact_pass, out, cfg.warmup_iters, cfg.measured_iters);

  return report_from(cfg, kernel_time, exact_time);
}

AblationReport fusion_ablation(const BenchConfig& cfg) {
  if (cfg.workload != Workload::SoftmaxMatrix &&
      cfg.workload != Workload::GeluVector) {
    throw std::invalid_argument(
        "fusion_ablation: workload must be softmax_matrix or gelu_vector");
  }
  validate(cfg);
  const NumericBuffer in = fill_inputs(cfg);
  NumericBuffer out_fused(in.size());
  NumericBuffer out_unfused(in.size());
  NumericBuffer scratch(cfg.workload == Workload::SoftmaxMatrix ? cfg.cols : 0);

  const Pass fused_pass = make_pass(cfg, cfg.kernel, true, in, out_fused, scratch);
  const Pass unfused_pass = make_pass(cfg, cfg.kernel, false, in, out_unfused, scratch);
  const Pass exact_pass = make_pass(cfg, KernelChoice::Exact, true, in, out_fused, scratch);

  // Interleave the paired measurements, alternating which variant goes
  // first, so load drift and cache state skew both variants alike.
  using clock = std::chrono::steady_clock;
  for (int i = 0; i < cfg.warmup_iters; ++i) {
    fused_pass.run();
    unfused_pass.run();
  }
  const double fused_checksum = checksum_of(out_fused);
  const double unfused_checksum = checksum_of(out_unfused);
  Timing fused_time, unfused_time;
  fused_time.min_seconds = unfused_time.min_seconds =
      std::numeric_limits<double>::infinity();
  double fused_sum = 0.0;
  double unfused_sum = 0.0;
  const auto timed = [](const Pass& pass) {
    const auto t0 = clock::now();
    pass.run();
    const auto t1 = clock::now();
    const double dt = std::chrono::duration<double>(t1 - t0).count();
    return dt > 0.0 ? dt : 1e-9;
  };
  for (int i = 0; i < cfg.measured_iters; ++i) {
    double df;
    double du;
    if (i % 2 == 0) {
      df = timed(fused_pass);
      du = timed(unfused_pass);
    } else {
      du = timed(unfused_pass);
      df = timed(fused_pass);
    }
    if (checksum_of(out_fused) != fused_checksum ||
        checksum_of(out_unfused) != unfused_checksum) {
      throw std::runtime_error("bench: checksum drift across iterations");
    }
    fused_sum += df;
    unfused_sum += du;
    fused_time.min_seconds = std::min(fused_time.min_seconds, df);
    unfused_time.min_seconds = std::min(unfused_time.min_seconds, du);
  }
  fused_time.mean_seconds = fused_sum / cfg.measured_iters;
  unfused_time.mean_seconds = unfused_sum / cfg.measured_iters;
  fused_time.checksum = fused_checksum;
  unfused_time.checksum = unfused_checksum;
  const Timing exact_time =
      measure(exact_pass, out_fused, cfg.warmup_iters, cfg.measured_iters);

  // Rebuild the fused outputs (the exact baseline reused the buffer), then
  // compare the two paths elementwise; fusion must not move the values.
  fused_pass.run();
  double divergence = 0.0;
  for (std::size_t i = 0; i < out_fused.size(); ++i) {
    const double a = out_fused[i];
    const double b = out_unfused[i];
    const double denom = std::max(std::abs(a), std::abs(b));
    if (denom > 0.0) {
      divergence = std::max(divergence, std::abs(a - b) / denom);
    }
  }

  BenchConfig fused_cfg = cfg;
  fused_cfg.fused = true;
  BenchConfig unfused_cfg = cfg;
  unfused_cfg.fused = false;

  AblationReport r;
  r.fused = report_from(fused_cfg, fused_time, exact_time);
  r.unfused = report_from(unfused_cfg, unfused_time, exact_time);
  // Minimum-based ratio; the minimum is the least noise-sensitive statistic.
  r.fusion_speedup = unfused_time.min_seconds / fused_time.min_seconds;
  r.max_rel_divergence = divergence;
  return r;
}

}  // namespace quake::bench
