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

#include "quake/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace quake::io {

namespace {

constexpr char kMagic[4] = {'Q', 'A', 'K', 'E'};

static_assert(std::endian::native == std::endian::little,
              "raw buffer I/O assumes a little-endian host");

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return ss.str();
}

NumericBuffer parse_raw(const std::string& bytes, const std::string& path) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError("not a QAKE raw buffer: " + path);
  }
  std::uint32_t count = 0;
  std::memcpy(&count, bytes.data() + 4, 4);
  const std::size_t payload = bytes.size() - 8;
  if (payload != static_cast<std::size_t>(count) * sizeof(float)) {
    throw ParseError("raw buffer length mismatch: " + path);
  }
  NumericBuffer values(count);
  std::memcpy(values.data(), bytes.data() + 8, payload);
  return values;
}

NumericBuffer parse_csv(const std::string& text, const std::string& path) {
  NumericBuffer values;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && (text[i] == ',' || text[i] == ' ' || text[i] == '\t' ||
                     text[i] == '\n' || text[i] == '\r')) {
      ++i;
    }
    if (i >= n) break;
    const char* begin = text.data() + i;
    char* end = nullptr;
    const float v = std::strtof(begin, &end);
    if (end == begin) {
      throw ParseError("bad numeric token in " + path);
    }
    values.push_back(v);
    i = static_cast<std::size_t>(end - text.data());
    if (i < n && text[i] != ',' && text[i] != ' ' && text[i] != '\t' &&
        text[i] != '\n' && text[i] != '\r') {
      throw ParseError("bad numeric token in " + path);
    }
  }
  return values;
}

}  // namespace

NumericBuffer read_buffer(const std::string& path, BufferFormat format) {
  const std::string bytes = read_file_bytes(path);
  return format == BufferFormat::Raw ? parse_raw(bytes, path)
                                     : parse_csv(bytes, path);
}

void write_buffer(const std::string& path, std::span<const float> values,
                  BufferFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  if (format == BufferFormat::Raw) {
    out.write(kMagic, 4);
    const std::uint32_t count = static_cast<std::uint32_t>(values.size());
    out.write(reinterpret_cast<const char*>(&count), 4);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(float)));
  } else {
    for (const float v : values) {
      out << format_number(v) << '\n';
    }
  }
  out.flush();
  if (!out) throw IoError("write failure: " + path);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string error_report_csv(const lab::ErrorReport& r) {
  std::ostringstream out;
  out << "kernel,lo,hi,samples,max_rel_err,mean_rel_err,argmax_input\n"
      << r.kernel << ',' << format_number(r.lo) << ',' << format_number(r.hi)
      << ',' << r.samples << ',' << format_number(r.max_rel_err) << ','
      << format_number(r.mean_rel_err) << ',' << format_number(r.argmax_input)
      << '\n';
  return out.str();
}

std::string error_report_json(const lab::ErrorReport& r) {
  nlohmann::json j{{"kernel", r.kernel},
                   {"lo", r.lo},
                   {"hi", r.hi},
                   {"samples", r.samples},
                   {"max_rel_err", r.max_rel_err},
                   {"mean_rel_err", r.mean_rel_err},
                   {"argmax_input", r.argmax_input}};
  return j.dump();
}

std::string grid_result_csv(const lab::GridSearchResult& r) {
  std::ostringstream out;
  out << "a0,a1,a2,best_max_rel_err,step_a0,step_a1,step_a2,points_searched\n"
      << format_number(r.best.a0) << ',' << format_number(r.best.a1) << ','
      << format_number(r.best.a2) << ',' << format_number(r.best_max_rel_err)
      << ',' << format_number(r.step_a0) << ',' << format_number(r.step_a1)
      << ',' << format_number(r.step_a2) << ',' << r.points_searched << '\n';
  return out.str();
}

std::string grid_result_json(const lab::GridSearchResult& r) {
  nlohmann::json j{
      {"best", {{"a0", r.best.a0}, {"a1", r.best.a1}, {"a2", r.best.a2}}},
      {"best_max_rel_err", r.best_max_rel_err},
      {"grid_resolution",
       {{"a0", r.step_a0}, {"a1", r.step_a1}, {"a2", r.step_a2}}},
      {"points_searched", r.points_searched}};
  return j.dump();
}

std::string bench_report_json_line(const bench::BenchReport& r) {
  nlohmann::json j{{"workload", r.workload},
                   {"kernel", r.kernel},
                   {"fused", r.fused},
                   {"elements", r.elements},
                   {"warmup_iters", r.warmup_iters},
                   {"measured_iters", r.measured_iters},
                   {"mean_seconds", r.mean_seconds},
                   {"min_seconds", r.min_seconds},
                   {"throughput_eps", r.throughput_eps},
                   {"speedup_vs_exact", r.speedup_vs_exact},
                   {"checksum", r.checksum},
                   {"threads", r.threads},
                   {"build", r.build},
                   {"autovec", r.autovec},
                   {"seed", r.seed}};
  return j.dump();
}

std::string bench_table(std::span<const bench::BenchReport> reports) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-16s %-8s %-7s %12s %12s %12s %10s\n",
                "workload", "kernel", "fused", "elements", "mean_ms", "min_ms",
                "speedup");
  out << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof(line), "%-16s %-8s %-7s %12zu %12.4f %12.4f %10.3f\n",
                  r.workload.c_str(), r.kernel.c_str(), r.fused ? "yes" : "no",
                  r.elements, r.mean_seconds * 1e3, r.min_seconds * 1e3,
                  r.speedup_vs_exact);
    out << line;
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failure: " + path);
}

}  // namespace quake::io
