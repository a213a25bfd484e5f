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

#ifndef QUAKE_BUFFER_HPP_
#define QUAKE_BUFFER_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace quake {

// Contiguous 1-D array of single-precision values. Matrices are row-major
// views over a buffer; no strided storage.
using NumericBuffer = std::vector<float>;

struct MatrixView {
  std::span<const float> data;
  std::size_t cols;

  std::size_t rows() const { return cols == 0 ? 0 : data.size() / cols; }
  bool well_formed() const { return cols > 0 && data.size() % cols == 0; }
  std::span<const float> row(std::size_t r) const {
    return data.subspan(r * cols, cols);
  }
};

}  // namespace quake

#endif  // QUAKE_BUFFER_HPP_
