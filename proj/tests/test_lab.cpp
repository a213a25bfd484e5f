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

#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "quake/lab.hpp"

using quake::KernelChoice;
using quake::QuadCoeffs;
namespace lab = quake::lab;

namespace {

lab::ExpConfig natural(KernelChoice kind, bool bias,
                       QuadCoeffs quad = QuadCoeffs::continuity()) {
  return {kind, true, bias, quad};
}

const lab::SweepSpec kUnitSweep{-80.0f, 80.0f, 1u << 20, 8};

}  // namespace

TEST_CASE("sweep of the biased first-order kernel") {
  const lab::ErrorReport r = lab::sweep_error(natural(KernelChoice::Quake, true), kUnitSweep);
  // Equal-ripple band of the centered secant: just under 3 percent.
  CHECK(r.max_rel_err >= 0.0295);
  CHECK(r.max_rel_err <= 0.0302);
  CHECK(r.mean_rel_err > 0.0);
  CHECK(r.mean_rel_err <= r.max_rel_err);
  CHECK(r.kernel == "quake");
  CHECK(r.argmax_input >= r.lo);
  CHECK(r.argmax_input <= r.hi);
}

TEST_CASE("sweep of the unbiased first-order kernel") {
  const lab::ErrorReport r = lab::sweep_error(natural(KernelChoice::Quake, false), kUnitSweep);
  // One-sided secant overshoot: (2/ln2)*exp(-1) - 1.
  CHECK(r.max_rel_err >= 0.0610);
  CHECK(r.max_rel_err <= 0.0620);
}

TEST_CASE("sweep of the second-order kernel with endpoint-exact coefficients") {
  const lab::ErrorReport r = lab::sweep_error(natural(KernelChoice::Quake2, false), kUnitSweep);
  CHECK(r.max_rel_err >= 0.0033);
  CHECK(r.max_rel_err <= 0.0035);
}

TEST_CASE("sweep of the exact kernel against itself is error free") {
  lab::SweepSpec spec{0.0f, 1.0f, 100'000, 0};
  const lab::ErrorReport r = lab::sweep_error(natural(KernelChoice::Exact, false), spec);
  CHECK(r.max_rel_err == 0.0);
  CHECK(r.mean_rel_err == 0.0);
}

TEST_CASE("sweep validation") {
  CHECK_THROWS_AS(lab::sweep_error(natural(KernelChoice::Quake, true),
                                   lab::SweepSpec{5.0f, 5.0f, 1u << 20, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(lab::sweep_error(natural(KernelChoice::Quake, true),
                                   lab::SweepSpec{0.0f, 1.0f, 100, 1}),
                  std::invalid_argument);
  // Outside the clamp bounds.
  CHECK_THROWS_AS(lab::sweep_error(natural(KernelChoice::Quake, true),
                                   lab::SweepSpec{-200.0f, 200.0f, 1u << 20, 1}),
                  std::invalid_argument);
}

TEST_CASE("sweep reports are reproducible") {
  const lab::SweepSpec spec{-20.0f, 20.0f, 1u << 18, 16};
  const lab::ErrorReport a = lab::sweep_error(natural(KernelChoice::Quake2, false), spec);
  const lab::ErrorReport b = lab::sweep_error(natural(KernelChoice::Quake2, false), spec);
  CHECK(a.max_rel_err == b.max_rel_err);
  CHECK(a.mean_rel_err == b.mean_rel_err);
  CHECK(a.argmax_input == b.argmax_input);
  CHECK(a.samples == b.samples);
}

TEST_CASE("kernel sweep agrees with the pure polynomial evaluation") {
  // Same quantity two ways: the kernel sweep walks assembled words over one
  // mantissa period, quad_max_rel_err evaluates the refinement polynomial
  // directly. The kernel path adds its own word-arithmetic rounding, which
  // keeps the two apart by a few parts in a million.
  lab::ExpConfig cfg{KernelChoice::Quake2, false, false, QuadCoeffs::continuity()};
  lab::SweepSpec spec{0.0f, 1.0f, 1u << 20, 1};
  const lab::ErrorReport r = lab::sweep_error(cfg, spec);
  const double poly = lab::quad_max_rel_err(1.0 / 3.0, 0.0, 2.0 / 3.0, 1u << 20);
  CHECK(std::abs(r.max_rel_err - poly) <= 1e-5);
}

TEST_CASE("grid search over the published neighborhood") {
  const lab::GridSearchResult g = lab::grid_search_quad(lab::GridSpec{});
  // Argmin of the worst-case relative error over the full mantissa
  // interval, at step 0.001.
  CHECK(static_cast<double>(g.best.a0) == doctest::Approx(0.336).epsilon(1e-6));
  CHECK(static_cast<double>(g.best.a1) == doctest::Approx(-0.012).epsilon(1e-5));
  CHECK(static_cast<double>(g.best.a2) == doctest::Approx(0.677).epsilon(1e-6));
  CHECK(g.best_max_rel_err >= 0.0019);
  CHECK(g.best_max_rel_err <= 0.0021);
  CHECK(g.points_searched == 61u * 71u * 81u);

  // No explicitly probed grid point beats the winner.
  std::mt19937 rng(77);
  const lab::GridSpec spec{};
  for (int i = 0; i < 100; ++i) {
    const double a0 = spec.a0.at(rng() % spec.a0.points());
    const double a1 = spec.a1.at(rng() % spec.a1.points());
    const double a2 = spec.a2.at(rng() % spec.a2.points());
    CHECK(g.best_max_rel_err <= lab::quad_max_rel_err(a0, a1, a2) + 2e-6);
  }

  // The reported error survives an independent re-sweep of the winner at a
  // different resolution.
  const double resweep = lab::quad_max_rel_err(
      static_cast<double>(g.best.a0), static_cast<double>(g.best.a1),
      static_cast<double>(g.best.a2), (1u << 16) + 7);
  CHECK(std::abs(resweep - g.best_max_rel_err) <= 1e-5);
}

TEST_CASE("degenerate one-point grids") {
  lab::GridSpec endpoint;
  endpoint.a0 = {1.0 / 3.0, 1.0 / 3.0, 1.0};
  endpoint.a1 = {0.0, 0.0, 1.0};
  endpoint.a2 = {2.0 / 3.0, 2.0 / 3.0, 1.0};
  const lab::GridSearchResult g = lab::grid_search_quad(endpoint);
  CHECK(g.best_max_rel_err == doctest::Approx(0.003413).epsilon(0.01));

  lab::GridSpec constant;
  constant.a0 = {0.0, 0.0, 1.0};
  constant.a1 = {0.0, 0.0, 1.0};
  constant.a2 = {1.0, 1.0, 1.0};
  const lab::GridSearchResult c = lab::grid_search_quad(constant);
  CHECK(c.best.a0 == 0.0f);
  CHECK(c.best.a2 == 1.0f);
  CHECK(c.best_max_rel_err == doctest::Approx(0.5).epsilon(0.002));
}

TEST_CASE("grid search rejects an empty grid") {
  lab::GridSpec bad;
  bad.a0 = {0.4, 0.3, 0.001};  // hi < lo
  CHECK_THROWS_AS(lab::grid_search_quad(bad), std::invalid_argument);
}

TEST_CASE("continuity probe across mantissa wraparounds") {
  const lab::ExpConfig q{KernelChoice::Quake, false, false, QuadCoeffs::continuity()};
  const lab::ExpConfig q2{KernelChoice::Quake2, false, false, QuadCoeffs::continuity()};
  CHECK(lab::continuity_probe(q, -50, 50).worst_jump <= 1e-5);
  CHECK(lab::continuity_probe(q2, -50, 50).worst_jump <= 1e-5);

  // The grid-search optimum is not endpoint-exact: a genuine one-percent
  // step survives at every wraparound.
  const lab::ExpConfig qm{KernelChoice::Quake2, false, false, QuadCoeffs::minimax()};
  const double jump = lab::continuity_probe(qm, -50, 50).worst_jump;
  CHECK(jump > 0.0);
  CHECK(jump >= 0.0095);
  CHECK(jump <= 0.0105);
}

TEST_CASE("bias reoptimization recovers the canonical centering offset") {
  const lab::BiasSearchResult b = lab::bias_reoptimize(natural(KernelChoice::Quake, true));
  CHECK(b.beta >= 0.040f);
  CHECK(b.beta <= 0.047f);
  CHECK(b.max_rel_err >= 0.0295);
  CHECK(b.max_rel_err <= 0.0301);
  CHECK(b.near_reference_bias);
}

TEST_CASE("bias reoptimization of the second-order kernel stays near zero") {
  const lab::BiasSearchResult b = lab::bias_reoptimize(natural(KernelChoice::Quake2, false));
  CHECK(b.beta >= 0.0f);
  CHECK(b.beta <= 0.004f);
  CHECK(b.max_rel_err <= 0.0034);
  CHECK_FALSE(b.near_reference_bias);
}

TEST_CASE("unbiased base-2 first-order error matches the analytic maximum") {
  lab::ExpConfig cfg{KernelChoice::Quake, false, false, QuadCoeffs::continuity()};
  lab::SweepSpec spec{-50.0f, 50.0f, 1u << 20, 8};
  const lab::ErrorReport r = lab::sweep_error(cfg, spec);
  CHECK(r.max_rel_err >= 0.0610);
  CHECK(r.max_rel_err <= 0.0619);
}
