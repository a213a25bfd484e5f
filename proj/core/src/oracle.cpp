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

#include "quake/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace quake::oracle {

namespace {
constexpr double kKappa = 0.044715;
const double kRoot2OverPi = std::sqrt(2.0 / std::numbers::pi);
}  // namespace

double exact_exp(double x) { return std::exp(x); }

void exact_softmax(std::span<const float> v, double temperature,
                   std::span<double> out) {
  if (v.empty() || out.size() != v.size()) {
    throw std::invalid_argument("exact_softmax: bad shapes");
  }
  const double m = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(temperature * (static_cast<double>(v[i]) - m));
    sum += out[i];
  }
  for (std::size_t i = 0; i < v.size(); ++i) out[i] /= sum;
}

std::vector<double> exact_softmax(std::span<const float> v, double temperature) {
  std::vector<double> out(v.size());
  exact_softmax(v, temperature, out);
  return out;
}

double exact_logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double exact_gelu_tanh(double x) {
  return 0.5 * x * (1.0 + std::tanh(kRoot2OverPi * (x + kKappa * x * x * x)));
}

double exact_gelu_sigmoid(double x) {
  const double arg = 2.0 * kKappa * kRoot2OverPi * x * (1.0 / kKappa + x * x);
  return x * exact_logistic(arg);
}

}  // namespace quake::oracle
