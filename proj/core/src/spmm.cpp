// SPDX-License-Identifier: Apache-2.0
#include "aigsage/spmm.hpp"

#include <chrono>
#include <random>

namespace aigsage::spmm {

DegreeSort degree_sort(std::uint32_t rows, std::span<const std::uint64_t> row_ptr) {
  DegreeSort ds;
  ds.perm.resize(rows);
  ds.sorted_row_ptr.resize(static_cast<std::size_t>(rows) + 1);

  std::uint32_t max_degree = 0;
  for (std::uint32_t r = 0; r < rows; ++r)
    max_degree = std::max(max_degree, static_cast<std::uint32_t>(row_ptr[r + 1] - row_ptr[r]));

  std::vector<std::uint32_t> offset(static_cast<std::size_t>(max_degree) + 2, 0);
  for (std::uint32_t r = 0; r < rows; ++r)
    ++offset[(row_ptr[r + 1] - row_ptr[r]) + 1];
  for (std::size_t d = 1; d < offset.size(); ++d) offset[d] += offset[d - 1];

  // Original row order within a bucket is preserved: the sort is stable.
  for (std::uint32_t r = 0; r < rows; ++r) {
    const std::uint32_t d = static_cast<std::uint32_t>(row_ptr[r + 1] - row_ptr[r]);
    ds.perm[offset[d]++] = r;
  }

  ds.sorted_row_ptr[0] = 0;
  for (std::uint32_t s = 0; s < rows; ++s) {
    const std::uint32_t r = ds.perm[s];
    ds.sorted_row_ptr[s + 1] = ds.sorted_row_ptr[s] + (row_ptr[r + 1] - row_ptr[r]);
  }
  return ds;
}

SpmmPlan build_plan(std::uint32_t rows, std::span<const std::uint64_t> row_ptr, unsigned workers,
                    std::uint32_t hd_threshold, std::uint32_t ld_threshold,
                    std::uint32_t nz_budget) {
  if (ld_threshold < 1 || nz_budget < 1) throw std::invalid_argument("build_plan: thresholds must be >= 1");
  if (hd_threshold <= ld_threshold)
    throw std::invalid_argument("build_plan: hd_threshold must exceed ld_threshold");

  SpmmPlan plan;
  plan.rows = rows;
  plan.nnz = rows == 0 ? 0 : row_ptr[rows];
  plan.hd_threshold = hd_threshold;
  plan.ld_threshold = ld_threshold;
  plan.nz_budget = nz_budget;
  plan.workers = workers == 0 ? WorkerPool::default_workers() : workers;

  DegreeSort ds = degree_sort(rows, row_ptr);
  plan.perm = std::move(ds.perm);
  plan.sorted_row_ptr = std::move(ds.sorted_row_ptr);
  plan.inv_perm.resize(rows);
  for (std::uint32_t s = 0; s < rows; ++s) plan.inv_perm[plan.perm[s]] = s;

  auto sorted_degree = [&](std::uint32_t s) {
    return static_cast<std::uint32_t>(plan.sorted_row_ptr[s + 1] - plan.sorted_row_ptr[s]);
  };

  // Band boundaries over the sorted order: zero rows, LD, MID, HD.
  std::uint32_t z = 0;
  while (z < rows && sorted_degree(z) == 0) ++z;
  std::uint32_t ld_end = z;
  while (ld_end < rows && sorted_degree(ld_end) <= ld_threshold) ++ld_end;
  std::uint32_t mid_end = ld_end;
  while (mid_end < rows && sorted_degree(mid_end) < hd_threshold) ++mid_end;

  plan.ld_row_begin = z;
  plan.ld_row_end = ld_end;

  // HD rows first: each row split into exactly 32 chunks holding
  // floor(wid/32) or ceil(wid/32) nonzeros; the remainder lands on the
  // trailing chunks. Chunks are emitted in row pairs, mirroring the
  // two-rows-per-64-warp block layout.
  for (std::uint32_t s = mid_end; s < rows; ++s) plan.hd_rows.push_back(s);
  for (std::size_t i = 0; i < plan.hd_rows.size(); ++i) {
    const std::uint32_t s = plan.hd_rows[i];
    const std::uint32_t r = plan.perm[s];
    const std::uint32_t wid = static_cast<std::uint32_t>(row_ptr[r + 1] - row_ptr[r]);
    const std::uint32_t q = wid / kHdChunksPerRow;
    const std::uint32_t rem = wid % kHdChunksPerRow;
    std::uint64_t nz = row_ptr[r];
    for (std::uint32_t c = 0; c < kHdChunksPerRow; ++c) {
      const std::uint32_t len = q + (c >= kHdChunksPerRow - rem ? 1 : 0);
      WorkUnit u;
      u.kind = WorkKind::HdChunk;
      u.sorted_row = s;
      u.nz_begin = nz;
      u.nz_end = nz + len;
      u.partial_slot = static_cast<std::uint32_t>(i) * kHdChunksPerRow + c;
      plan.work_units.push_back(u);
      nz += len;
    }
  }

  // MID band: one unit per row, largest degrees first.
  for (std::uint32_t s = mid_end; s-- > ld_end;) {
    plan.mid_rows.push_back(s);
    WorkUnit u;
    u.kind = WorkKind::MidRow;
    u.sorted_row = s;
    plan.work_units.push_back(u);
  }

  // LD groups: per distinct degree d, floor(nz_budget / d) rows per unit
  // (clamped to one), last unit of a group may hold fewer.
  std::uint32_t s = z;
  while (s < ld_end) {
    const std::uint32_t d = sorted_degree(s);
    std::uint32_t group_end = s;
    while (group_end < ld_end && sorted_degree(group_end) == d) ++group_end;
    plan.ld_groups.push_back({d, s, group_end});
    const std::uint32_t rows_per_unit = std::max<std::uint32_t>(1, nz_budget / d);
    for (std::uint32_t r0 = s; r0 < group_end; r0 += rows_per_unit) {
      WorkUnit u;
      u.kind = WorkKind::LdBatch;
      u.sorted_row = r0;
      u.row_count = std::min(rows_per_unit, group_end - r0);
      plan.work_units.push_back(u);
    }
    s = group_end;
  }

  return plan;
}

BenchReport bench(const CsrMatrix<float>& m, std::uint32_t f, int reps, WorkerPool* pool) {
  if (reps < 3) throw std::invalid_argument("bench: reps must be >= 3");
  WorkerPool local_pool(pool ? 0 : WorkerPool::default_workers());
  WorkerPool& p = pool ? *pool : local_pool;

  std::mt19937_64 rng(0xb0'0b1e5u);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  std::vector<float> dense(static_cast<std::size_t>(m.cols) * f);
  for (float& v : dense) v = dist(rng);
  std::vector<float> out(static_cast<std::size_t>(m.rows) * f);

  using clock = std::chrono::steady_clock;
  auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };

  const auto t_plan = clock::now();
  const SpmmPlan plan = build_plan(m, p.workers());
  BenchReport report;
  report.plan_ms = ms_since(t_plan);
  report.workers = p.workers();
  report.reps = reps;

  execute(plan, m, dense.data(), f, out.data(), &p);  // warm-up
  std::vector<double> exec_times, base_times;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clock::now();
    execute(plan, m, dense.data(), f, out.data(), &p);
    exec_times.push_back(ms_since(t0));
  }
  row_parallel_reference(m, dense.data(), f, out.data(), p);  // warm-up
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clock::now();
    row_parallel_reference(m, dense.data(), f, out.data(), p);
    base_times.push_back(ms_since(t0));
  }

  report.exec_ms = median(exec_times);
  report.baseline_ms = median(base_times);
  report.speedup = report.baseline_ms / report.exec_ms;
  return report;
}

}  // namespace aigsage::spmm
