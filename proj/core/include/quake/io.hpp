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

#ifndef QUAKE_IO_HPP_
#define QUAKE_IO_HPP_

#include <span>
#include <stdexcept>
#include <string>

#include "quake/bench.hpp"
#include "quake/buffer.hpp"
#include "quake/lab.hpp"

namespace quake::io {

// Malformed content (bad magic, bad token, truncated payload).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem-level failure (missing file, unwritable path).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Buffer file formats:
//   Csv — decimal floats separated by commas and/or newlines, written one
//         value per line with 9 significant digits (round-trippable).
//   Raw — 8-byte header (magic "QAKE" + little-endian u32 element count)
//         followed by little-endian 32-bit floats; bit-exact.
enum class BufferFormat { Csv, Raw };

NumericBuffer read_buffer(const std::string& path, BufferFormat format);
void write_buffer(const std::string& path, std::span<const float> values,
                  BufferFormat format);

// Round-trippable decimal rendering with 9 significant digits.
std::string format_number(double v);

// Report serialization. CSV columns for the error report:
//   kernel,lo,hi,samples,max_rel_err,mean_rel_err,argmax_input
// JSON mirrors the field names exactly.
std::string error_report_csv(const lab::ErrorReport& r);
std::string error_report_json(const lab::ErrorReport& r);
std::string grid_result_csv(const lab::GridSearchResult& r);
std::string grid_result_json(const lab::GridSearchResult& r);

// One JSON object per line for benchmark reports, plus an aligned table.
std::string bench_report_json_line(const bench::BenchReport& r);
std::string bench_table(std::span<const bench::BenchReport> reports);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace quake::io

#endif  // QUAKE_IO_HPP_
