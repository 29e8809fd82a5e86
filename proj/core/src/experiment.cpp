// SPDX-License-Identifier: Apache-2.0
#include "aigsage/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "aigsage/circuitgen.hpp"
#include "aigsage/partition.hpp"
#include "aigsage/verify.hpp"

namespace aigsage {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string canonical_spec(const ExperimentSpec& s) {
  std::ostringstream o;
  o << "widths=";
  for (std::uint32_t w : s.widths) o << w << ',';
  o << ";ks=";
  for (std::uint32_t k : s.partition_counts) o << k << ',';
  o << ";method=" << s.method << ";assign=" << s.assign_file
    << ";regrow_variants=" << s.regrow_variants << ";seed=" << s.seed << ";batch=" << s.batch
    << ";train_width=" << s.train_width << ";epochs=" << s.epochs << ";lr=" << s.learning_rate;
  return o.str();
}

PartitionAssignment make_assignment(const ExperimentSpec& spec, const EdaGraph& g,
                                    std::uint32_t k) {
  if (spec.method == "multilevel") return partition_multilevel(g, k, spec.seed);
  if (spec.method == "topo") return partition_topo_chunks(g, k);
  if (spec.method == "file") {
    PartitionAssignment pa = load_assignment(spec.assign_file, g.n);
    if (pa.k != k)
      throw std::runtime_error("pipeline: assignment file has k=" + std::to_string(pa.k) +
                               ", requested " + std::to_string(k));
    return pa;
  }
  throw std::invalid_argument("pipeline: unknown partition method '" + spec.method + "'");
}

std::string verdict_string(const VerifyReport& r) {
  if (r.inconclusive) return "inconclusive";
  return r.equivalent ? "equivalent" : "not_equivalent";
}

}  // namespace

std::string config_hash(const ExperimentSpec& spec) {
  std::ostringstream o;
  o << std::hex << fnv1a64(canonical_spec(spec));
  return o.str();
}

PipelineReport run_pipeline(const ExperimentSpec& spec) {
  if (spec.widths.empty()) throw std::invalid_argument("pipeline: no widths given");
  for (std::uint32_t w : spec.widths)
    if (w < 2) throw std::invalid_argument("pipeline: widths must be >= 2");
  for (std::uint32_t k : spec.partition_counts)
    if (k < 1) throw std::invalid_argument("pipeline: partition counts must be >= 1");
  if (spec.method == "file" && (spec.widths.size() != 1 || spec.partition_counts.size() != 1))
    throw std::invalid_argument("pipeline: method=file supports a single width and k");

  PipelineReport report;
  report.config_hash = config_hash(spec);

  const auto t_train = clock_type::now();
  const CsaCircuit train_circuit = gen_csa_multiplier(spec.train_width);
  const EdaGraph train_graph = encode(train_circuit.aig, train_circuit.gt);
  TrainConfig cfg;
  cfg.epochs = spec.epochs;
  cfg.learning_rate = spec.learning_rate;
  cfg.seed = spec.seed;
  TrainStats stats;
  const Model model = train(train_graph, cfg, &stats);
  report.train_seconds = seconds_since(t_train);
  report.train_accuracy = stats.accuracy.empty() ? 0.0 : stats.accuracy.back();

  struct Cell {
    std::uint32_t width, k;
    bool regrown;
  };
  std::vector<Cell> cells;
  for (std::uint32_t w : spec.widths)
    for (std::uint32_t k : spec.partition_counts)
      for (int r = spec.regrow_variants ? 1 : 0; r >= 0; --r)
        cells.push_back({w, k, r != 0});

  report.rows.resize(cells.size());

  // Per-width shared state, built once.
  struct WidthData {
    CsaCircuit circuit;
    EdaGraph graph;  // batched when spec.batch > 1
    std::uint32_t single_n = 0;
  };
  std::map<std::uint32_t, WidthData> per_width;
  for (std::uint32_t w : spec.widths) {
    if (per_width.count(w)) continue;
    WidthData& wd = per_width[w];
    wd.circuit = gen_csa_multiplier(w);
    EdaGraph g = encode(wd.circuit.aig, wd.circuit.gt);
    wd.single_n = g.n;
    wd.graph = spec.batch > 1 ? batch(g, spec.batch) : std::move(g);
  }

  auto run_cell = [&](std::size_t idx) {
    const Cell& cell = cells[idx];
    const WidthData& wd = per_width.at(cell.width);
    PipelineRow row;
    row.width = cell.width;
    row.k = cell.k;
    row.regrown = cell.regrown;

    const PartitionAssignment pa = make_assignment(spec, wd.graph, cell.k);
    row.crossing_fraction = crossing_fraction(wd.graph, pa);
    const std::vector<AugmentedPartition> parts =
        cell.regrown ? regrow(wd.graph, pa) : core_subgraphs(wd.graph, pa);
    row.footprint_bytes = footprint_proxy(parts);

    const auto t_infer = clock_type::now();
    const Prediction pred = predict(model, wd.graph, parts);
    row.infer_seconds = seconds_since(t_infer);
    row.accuracy = pred.accuracy;
    row.train_seconds = report.train_seconds;

    std::vector<std::uint8_t> labels(pred.labels.begin(), pred.labels.begin() + wd.single_n);
    const VerifyReport vr = backward_rewrite(wd.circuit.aig, labels, {}, cell.width);
    row.verify_verdict = verdict_string(vr);

    report.rows[idx] = std::move(row);
  };

  if (spec.jobs > 1) {
    WorkerPool cell_pool(spec.jobs);
    cell_pool.for_each(cells.size(), run_cell);
  } else {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  }

  // Footprint reduction against the k=1 row of the same width and mode.
  for (PipelineRow& row : report.rows) {
    for (const PipelineRow& base : report.rows)
      if (base.width == row.width && base.regrown == row.regrown && base.k == 1 &&
          base.footprint_bytes > 0)
        row.footprint_reduction =
            1.0 - static_cast<double>(row.footprint_bytes) / static_cast<double>(base.footprint_bytes);
  }

  if (!spec.out_csv.empty()) write_pipeline_csv(spec.out_csv, report);
  if (!spec.out_json.empty()) write_pipeline_json(spec.out_json, report);
  return report;
}

void write_pipeline_csv(const std::string& path, const PipelineReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out << "width,k,regrown,accuracy,crossing_fraction,footprint_bytes,footprint_reduction,"
         "train_seconds,infer_seconds,verify_verdict,config_hash\n";
  for (const PipelineRow& r : report.rows)
    out << r.width << ',' << r.k << ',' << (r.regrown ? 1 : 0) << ',' << r.accuracy << ','
        << r.crossing_fraction << ',' << r.footprint_bytes << ',' << r.footprint_reduction << ','
        << r.train_seconds << ',' << r.infer_seconds << ',' << r.verify_verdict << ','
        << report.config_hash << '\n';
}

void write_pipeline_json(const std::string& path, const PipelineReport& report) {
  nlohmann::json j;
  j["config_hash"] = report.config_hash;
  j["train_seconds"] = report.train_seconds;
  j["train_accuracy"] = report.train_accuracy;
  j["rows"] = nlohmann::json::array();
  for (const PipelineRow& r : report.rows) {
    j["rows"].push_back({{"width", r.width},
                         {"k", r.k},
                         {"regrown", r.regrown},
                         {"accuracy", r.accuracy},
                         {"crossing_fraction", r.crossing_fraction},
                         {"footprint_bytes", r.footprint_bytes},
                         {"footprint_reduction", r.footprint_reduction},
                         {"train_seconds", r.train_seconds},
                         {"infer_seconds", r.infer_seconds},
                         {"verify_verdict", r.verify_verdict},
                         {"config_hash", report.config_hash}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write json: " + path);
  out << j.dump(2) << '\n';
}

BenchResult run_bench(const BenchSpec& spec) {
  spmm::CsrMatrix<float> m;
  if (!spec.matrix_file.empty()) {
    m = spmm::read_matrix_market_file(spec.matrix_file);
  } else if (spec.synthetic == "polarized") {
    m = spmm::make_polarized(spec.n, spec.n, 0.01, 1024, 3, 0x9e3779b9u);
  } else if (spec.synthetic == "uniform") {
    m = spmm::make_uniform(spec.n, spec.n, 8, 0x9e3779b9u);
  } else {
    throw std::invalid_argument("bench: need a matrix file or synthetic kind");
  }
  m.validate();

  BenchResult result;
  result.rows = m.rows;
  result.nnz = m.nnz();

  WorkerPool pool(spec.workers);

  // Correctness gate before timing: identity product plus planned output
  // against the sequential reference on the bench matrix.
  {
    const spmm::CsrMatrix<float> eye = spmm::make_identity(256);
    std::vector<float> dense(256 * 4);
    for (std::size_t i = 0; i < dense.size(); ++i) dense[i] = static_cast<float>(i % 97) * 0.25f;
    const auto plan = spmm::build_plan(eye, pool.workers());
    const std::vector<float> got = spmm::execute(plan, eye, dense, 4u, &pool);
    bool ok = got == dense;

    std::vector<float> x(static_cast<std::size_t>(m.cols) * spec.f);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<float>((i * 31 + 7) % 113) / 113.0f;
    const auto mplan = spmm::build_plan(m, pool.workers());
    const std::vector<float> a = spmm::execute(mplan, m, x, spec.f, &pool);
    const std::vector<float> b = spmm::reference_spmm(m, x, spec.f);
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      const float denom = std::max({std::abs(a[i]), std::abs(b[i]), 1e-20f});
      if (std::abs(a[i] - b[i]) / denom > 1e-5f) ok = false;
    }
    result.correctness_ok = ok;
  }

  result.report = spmm::bench(m, spec.f, spec.reps, &pool);
  if (!spec.out_json.empty()) write_bench_json(spec.out_json, result);
  return result;
}

void write_bench_json(const std::string& path, const BenchResult& result) {
  nlohmann::json j{{"rows", result.rows},
                   {"nnz", result.nnz},
                   {"workers", result.report.workers},
                   {"reps", result.report.reps},
                   {"plan_ms", result.report.plan_ms},
                   {"exec_ms", result.report.exec_ms},
                   {"baseline_ms", result.report.baseline_ms},
                   {"speedup", result.report.speedup},
                   {"correctness_ok", result.correctness_ok}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write json: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace aigsage
