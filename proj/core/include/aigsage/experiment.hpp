// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aigsage/gnn.hpp"
#include "aigsage/matrix_io.hpp"

namespace aigsage {

struct ExperimentSpec {
  std::vector<std::uint32_t> widths;
  std::vector<std::uint32_t> partition_counts = {1, 2, 4, 8, 16, 32};
  std::string method = "multilevel";  // multilevel | topo | file
  std::string assign_file;            // required when method == file
  bool regrow_variants = true;        // emit rows with re-growth both on and off
  std::uint64_t seed = 7;
  std::uint32_t batch = 1;
  std::uint32_t train_width = 8;
  std::uint32_t epochs = 100;
  double learning_rate = 1e-3;
  std::uint32_t jobs = 1;
  std::string out_csv;
  std::string out_json;
};

struct PipelineRow {
  std::uint32_t width = 0;
  std::uint32_t k = 0;
  bool regrown = false;
  double accuracy = 0.0;
  double crossing_fraction = 0.0;
  std::uint64_t footprint_bytes = 0;
  double footprint_reduction = 0.0;  // vs. k = 1 of the same width and mode
  double train_seconds = 0.0;
  double infer_seconds = 0.0;
  std::string verify_verdict;  // equivalent | not_equivalent | inconclusive
};

struct PipelineReport {
  std::string config_hash;
  std::vector<PipelineRow> rows;
  double train_seconds = 0.0;
  double train_accuracy = 0.0;
};

/// Hex digest of the canonical spec serialization; identical specs hash
/// identically across runs.
std::string config_hash(const ExperimentSpec& spec);

/// Trains once on the train-width multiplier, then sweeps (width, k,
/// regrow on/off): accuracy, crossing fraction, footprint proxy and
/// reduction, wall times, and the verification verdict per row. Writes CSV
/// and JSON when paths are set.
PipelineReport run_pipeline(const ExperimentSpec& spec);

void write_pipeline_csv(const std::string& path, const PipelineReport& report);
void write_pipeline_json(const std::string& path, const PipelineReport& report);

struct BenchSpec {
  std::string matrix_file;     // Matrix Market path, or empty for synthetic
  std::string synthetic;       // "polarized" | "uniform" | ""
  std::uint32_t n = 50'000;
  std::uint32_t f = 32;
  int reps = 10;
  unsigned workers = 0;  // 0 = default
  std::string out_json;
};

struct BenchResult {
  spmm::BenchReport report;
  bool correctness_ok = false;  // identity gate + planned-vs-reference check
  std::uint32_t rows = 0;
  std::uint64_t nnz = 0;
};

BenchResult run_bench(const BenchSpec& spec);
void write_bench_json(const std::string& path, const BenchResult& result);

}  // namespace aigsage
