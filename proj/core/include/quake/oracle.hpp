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

#ifndef QUAKE_ORACLE_HPP_
#define QUAKE_ORACLE_HPP_

#include <span>
#include <vector>

namespace quake::oracle {

// Double-precision references used by the accuracy lab and the test
// suites as ground truth. Results are rounded to single precision only at
// the caller's boundary, never inside.

double exact_exp(double x);

// Numerically stable softmax (max-subtraction, double accumulation).
void exact_softmax(std::span<const float> v, double temperature,
                   std::span<double> out);
std::vector<double> exact_softmax(std::span<const float> v, double temperature);

double exact_logistic(double x);

// tanh-form GELU: 0.5*x*(1 + tanh(sqrt(2/pi)*(x + 0.044715*x^3))).
double exact_gelu_tanh(double x);

// Sigmoid-form GELU: x * sigmoid(2*0.044715*sqrt(2/pi)*x*(1/0.044715 + x^2)).
// Algebraically identical to the tanh form.
double exact_gelu_sigmoid(double x);

}  // namespace quake::oracle

#endif  // QUAKE_ORACLE_HPP_
