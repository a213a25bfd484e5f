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

// Command-line front end: error sweeps, coefficient grid search, micro-
// benchmarks, and file-based batch application of the non-linearities.
//
// Exit codes: 0 success, 2 usage/validation error, 3 I/O error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "quake/bench.hpp"
#include "quake/io.hpp"
#include "quake/kernels.hpp"
#include "quake/lab.hpp"
#include "quake/nonlin.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

quake::KernelChoice parse_kernel(const std::string& name) {
  if (name == "exact") return quake::KernelChoice::Exact;
  if (name == "quake") return quake::KernelChoice::Quake;
  if (name == "quake2") return quake::KernelChoice::Quake2;
  throw UsageError("unknown kernel: " + name);
}

std::pair<float, float> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError("range must be lo:hi, got: " + text);
  }
  try {
    const float lo = std::stof(text.substr(0, colon));
    const float hi = std::stof(text.substr(colon + 1));
    return {lo, hi};
  } catch (const std::exception&) {
    throw UsageError("range must be lo:hi, got: " + text);
  }
}

quake::lab::GridAxis parse_axis(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw UsageError("grid axis must be lo:hi:step, got: " + text);
  }
  try {
    return {std::stod(text.substr(0, c1)), std::stod(text.substr(c1 + 1, c2 - c1 - 1)),
            std::stod(text.substr(c2 + 1))};
  } catch (const std::exception&) {
    throw UsageError("grid axis must be lo:hi:step, got: " + text);
  }
}

std::optional<bool> parse_bias(const std::string& text) {
  if (text.empty() || text == "auto") return std::nullopt;
  if (text == "on") return true;
  if (text == "off") return false;
  throw UsageError("--bias must be on, off, or auto");
}

quake::QuadCoeffs parse_quad(const std::string& text) {
  if (text == "continuity") return quake::QuadCoeffs::continuity();
  if (text == "minimax") return quake::QuadCoeffs::minimax();
  throw UsageError("--coeffs must be continuity or minimax");
}

quake::io::BufferFormat parse_format(const std::string& text) {
  if (text == "csv") return quake::io::BufferFormat::Csv;
  if (text == "raw") return quake::io::BufferFormat::Raw;
  throw UsageError("--format must be csv or raw");
}

void emit_report(const std::string& path, const std::string& csv,
                 const std::string& json, const std::string& format) {
  if (format != "csv" && format != "json") {
    throw UsageError("--format must be csv or json");
  }
  if (path.empty()) return;
  quake::io::write_text_file(path, format == "csv" ? csv : json);
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
  std::string kernel = "quake";
  std::string range = "-80:80";
  std::string base = "e";
  std::string bias = "auto";
  std::string coeffs = "continuity";
  std::uint64_t samples = 1u << 22;
  std::uint32_t period_stride = 1;
  std::string format = "csv";
  std::string output;
};

int run_sweep(const SweepArgs& args) {
  const auto [lo, hi] = parse_range(args.range);
  quake::lab::ExpConfig cfg;
  cfg.kind = parse_kernel(args.kernel);
  cfg.natural_base = args.base == "e";
  if (args.base != "e" && args.base != "2") {
    throw UsageError("--base must be e or 2");
  }
  cfg.centering_bias =
      quake::resolve_centering_bias(cfg.kind, parse_bias(args.bias));
  cfg.quad = parse_quad(args.coeffs);

  quake::lab::SweepSpec spec;
  spec.lo = lo;
  spec.hi = hi;
  spec.uniform_samples = args.samples;
  spec.period_stride = args.period_stride;

  const auto report = quake::lab::sweep_error(cfg, spec);
  std::printf("kernel=%s range=[%s, %s] samples=%llu\n", report.kernel.c_str(),
              quake::io::format_number(report.lo).c_str(),
              quake::io::format_number(report.hi).c_str(),
              static_cast<unsigned long long>(report.samples));
  std::printf("max_rel_err=%s mean_rel_err=%s argmax_input=%s\n",
              quake::io::format_number(report.max_rel_err).c_str(),
              quake::io::format_number(report.mean_rel_err).c_str(),
              quake::io::format_number(report.argmax_input).c_str());
  emit_report(args.output, quake::io::error_report_csv(report),
              quake::io::error_report_json(report), args.format);
  return kExitOk;
}

// ---- gridsearch -----------------------------------------------------------

struct GridArgs {
  std::string a0 = "0.30:0.36:0.001";
  std::string a1 = "-0.05:0.02:0.001";
  std::string a2 = "0.64:0.72:0.001";
  bool default_grid = false;
  std::string format = "csv";
  std::string output;
};

int run_gridsearch(const GridArgs& args) {
  quake::lab::GridSpec spec;  // defaults to the published neighborhood
  if (!args.default_grid) {
    spec.a0 = parse_axis(args.a0);
    spec.a1 = parse_axis(args.a1);
    spec.a2 = parse_axis(args.a2);
  }
  const auto result = quake::lab::grid_search_quad(spec);
  std::printf("best a0=%s a1=%s a2=%s\n",
              quake::io::format_number(result.best.a0).c_str(),
              quake::io::format_number(result.best.a1).c_str(),
              quake::io::format_number(result.best.a2).c_str());
  std::printf("best_max_rel_err=%s points_searched=%llu\n",
              quake::io::format_number(result.best_max_rel_err).c_str(),
              static_cast<unsigned long long>(result.points_searched));
  emit_report(args.output, quake::io::grid_result_csv(result),
              quake::io::grid_result_json(result), args.format);
  return kExitOk;
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
  std::string workload = "exp_vector";
  std::string kernel = "quake";
  std::size_t rows = 4096;
  std::size_t cols = 4096;
  std::size_t n = 260'000;
  bool full_scale = false;
  int warmup = 2;
  int iters = 10;
  bool ablation = false;
  std::string bias = "auto";
  float temperature = 1.0f;
  std::uint64_t seed = 42;
  std::string output;
};

int run_bench_cmd(const BenchArgs& args) {
  const auto workload = quake::bench::workload_from_name(args.workload);
  if (!workload) throw UsageError("unknown workload: " + args.workload);
  quake::bench::BenchConfig cfg;
  cfg.workload = *workload;
  cfg.rows = args.full_scale ? 16384 : args.rows;
  cfg.cols = args.full_scale ? 16384 : args.cols;
  cfg.n = args.n;
  cfg.kernel = parse_kernel(args.kernel);
  cfg.warmup_iters = args.warmup;
  cfg.measured_iters = args.iters;
  cfg.temperature = args.temperature;
  cfg.centering_bias = parse_bias(args.bias);
  cfg.seed = args.seed;

  std::vector<quake::bench::BenchReport> reports;
  std::string extra;
  if (args.ablation) {
    const auto ab = quake::bench::fusion_ablation(cfg);
    reports.push_back(ab.fused);
    reports.push_back(ab.unfused);
    extra = "fusion_speedup=" + quake::io::format_number(ab.fusion_speedup) +
            " max_rel_divergence=" +
            quake::io::format_number(ab.max_rel_divergence) + "\n";
  } else {
    reports.push_back(quake::bench::run_bench(cfg));
  }

  std::string jsonl;
  for (const auto& r : reports) {
    jsonl += quake::io::bench_report_json_line(r) + "\n";
  }
  std::fputs(jsonl.c_str(), stdout);
  std::fputs(quake::io::bench_table(reports).c_str(), stdout);
  std::fputs(extra.c_str(), stdout);
  if (!args.output.empty()) quake::io::write_text_file(args.output, jsonl);
  return kExitOk;
}

// ---- apply ----------------------------------------------------------------

struct ApplyArgs {
  std::string op;
  std::string kernel = "quake";
  std::string input;
  std::string output;
  std::string format = "csv";
  std::string bias = "auto";
  std::string coeffs = "continuity";
  std::size_t cols = 0;  // 0 = one row spanning the whole buffer
  float temperature = 1.0f;
};

int run_apply(const ApplyArgs& args) {
  const auto format = parse_format(args.format);
  const auto kernel = parse_kernel(args.kernel);
  const auto bias = parse_bias(args.bias);
  const quake::NumericBuffer in = quake::io::read_buffer(args.input, format);
  quake::NumericBuffer out(in.size());

  if (args.op == "softmax") {
    quake::SoftmaxParams params;
    params.temperature = args.temperature;
    params.centering_bias = bias;
    params.quad = parse_quad(args.coeffs);
    const std::size_t cols = args.cols == 0 ? in.size() : args.cols;
    quake::softmax_rows(in, cols, params, kernel, out);
  } else if (args.op == "gelu") {
    quake::gelu_buffer(in, out, kernel, bias);
  } else if (args.op == "logistic") {
    quake::logistic_buffer(in, out, kernel, bias);
  } else if (args.op == "exp") {
    if (kernel == quake::KernelChoice::Exact) {
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::exp(in[i]);
    } else {
      const quake::AffineCoeffs c = quake::natural_exp_coeffs(
          quake::resolve_centering_bias(kernel, bias));
      const quake::ClampRange r = quake::clamp_for(c);
      if (kernel == quake::KernelChoice::Quake) {
        quake::quake_buffer(in, out, c, r);
      } else {
        quake::quake2_buffer(in, out, c, parse_quad(args.coeffs), r);
      }
    }
  } else {
    throw UsageError("unknown op: " + args.op);
  }

  quake::io::write_buffer(args.output, out, format);
  return kExitOk;
}

// ---- report ---------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> merge;
  std::string output;
};

int run_report(const ReportArgs& args) {
  if (args.merge.empty()) throw UsageError("report: no input files");
  // Deduplicated, deterministically ordered merge of JSON-line records.
  std::set<std::string> records;
  for (const auto& path : args.merge) {
    std::ifstream in(path);
    if (!in) throw quake::io::IoError("cannot open for reading: " + path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) {
        throw quake::io::ParseError("bad JSON record in " + path);
      }
      records.insert(j.dump());
    }
  }
  std::vector<quake::bench::BenchReport> bench_rows;
  std::string jsonl;
  for (const auto& rec : records) {
    jsonl += rec + "\n";
    std::fputs(rec.c_str(), stdout);
    std::fputc('\n', stdout);
    const nlohmann::json j = nlohmann::json::parse(rec);
    if (j.contains("workload") && j.contains("mean_seconds")) {
      quake::bench::BenchReport r;
      r.workload = j.value("workload", "");
      r.kernel = j.value("kernel", "");
      r.fused = j.value("fused", true);
      r.elements = j.value("elements", std::size_t{0});
      r.mean_seconds = j.value("mean_seconds", 0.0);
      r.min_seconds = j.value("min_seconds", 0.0);
      r.speedup_vs_exact = j.value("speedup_vs_exact", 0.0);
      bench_rows.push_back(std::move(r));
    }
  }
  if (!bench_rows.empty()) {
    std::fputs(quake::io::bench_table(bench_rows).c_str(), stdout);
  }
  if (!args.output.empty()) quake::io::write_text_file(args.output, jsonl);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QuAKE approximate-exponential kernels"};
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Dense relative-error sweep");
  sweep_cmd->add_option("--kernel", sweep.kernel, "exact, quake, or quake2");
  sweep_cmd->add_option("--range", sweep.range, "sweep range lo:hi");
  sweep_cmd->add_option("--base", sweep.base, "exponential base: e or 2");
  sweep_cmd->add_option("--bias", sweep.bias, "centering bias: on, off, auto");
  sweep_cmd->add_option("--coeffs", sweep.coeffs, "quake2 coefficients: continuity or minimax");
  sweep_cmd->add_option("--samples", sweep.samples, "uniform sample count");
  sweep_cmd->add_option("--period-stride", sweep.period_stride,
                        "stride for the mantissa-period walk (0 = off)");
  sweep_cmd->add_option("--format", sweep.format, "report format: csv or json");
  sweep_cmd->add_option("--output", sweep.output, "report file path");

  GridArgs grid;
  auto* grid_cmd = app.add_subcommand("gridsearch",
                                      "Quadratic-coefficient grid search");
  grid_cmd->add_option("--a0", grid.a0, "a0 axis lo:hi:step");
  grid_cmd->add_option("--a1", grid.a1, "a1 axis lo:hi:step");
  grid_cmd->add_option("--a2", grid.a2, "a2 axis lo:hi:step");
  grid_cmd->add_flag("--default-grid", grid.default_grid,
                     "search the published coefficient neighborhood");
  grid_cmd->add_option("--format", grid.format, "report format: csv or json");
  grid_cmd->add_option("--output", grid.output, "report file path");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Microbenchmark harness");
  bench_cmd->add_option("--workload", bench.workload,
                        "softmax_matrix, gelu_vector, exp_vector, logistic_vector");
  bench_cmd->add_option("--kernel", bench.kernel, "exact, quake, or quake2");
  bench_cmd->add_option("--rows", bench.rows, "softmax matrix rows");
  bench_cmd->add_option("--cols", bench.cols, "softmax matrix cols");
  bench_cmd->add_option("--n", bench.n, "vector workload length");
  bench_cmd->add_flag("--full-scale", bench.full_scale,
                      "use the 16384x16384 softmax matrix");
  bench_cmd->add_option("--warmup", bench.warmup, "warm-up iterations (>= 2)");
  bench_cmd->add_option("--iters", bench.iters, "measured iterations (>= 10)");
  bench_cmd->add_flag("--ablation", bench.ablation,
                      "paired fused/unfused runs with the fusion speedup");
  bench_cmd->add_option("--bias", bench.bias, "centering bias: on, off, auto");
  bench_cmd->add_option("--temperature", bench.temperature, "softmax temperature");
  bench_cmd->add_option("--seed", bench.seed, "input RNG seed");
  bench_cmd->add_option("--output", bench.output, "JSONL output path");

  ApplyArgs apply;
  auto* apply_cmd = app.add_subcommand("apply", "Apply an op to a buffer file");
  apply_cmd->add_option("--op", apply.op, "softmax, gelu, logistic, or exp")
      ->required();
  apply_cmd->add_option("--kernel", apply.kernel, "exact, quake, or quake2");
  apply_cmd->add_option("--input", apply.input, "input buffer path")->required();
  apply_cmd->add_option("--output", apply.output, "output buffer path")->required();
  apply_cmd->add_option("--format", apply.format, "buffer format: csv or raw");
  apply_cmd->add_option("--cols", apply.cols, "softmax row length (0 = one row)");
  apply_cmd->add_option("--temperature", apply.temperature, "softmax temperature");
  apply_cmd->add_option("--bias", apply.bias, "centering bias: on, off, auto");
  apply_cmd->add_option("--coeffs", apply.coeffs,
                        "quake2 coefficients: continuity or minimax");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Merge report files");
  report_cmd->add_option("--merge", report.merge, "JSONL report files to merge")
      ->expected(-1);
  report_cmd->add_option("--output", report.output, "merged JSONL output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sweep_cmd->parsed()) return run_sweep(sweep);
    if (grid_cmd->parsed()) return run_gridsearch(grid);
    if (bench_cmd->parsed()) return run_bench_cmd(bench);
    if (apply_cmd->parsed()) return run_apply(apply);
    if (report_cmd->parsed()) return run_report(report);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const quake::io::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const quake::io::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
