// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "aigsage/worker_pool.hpp"

namespace aigsage::spmm {

template <class T>
struct CsrMatrix {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint64_t> row_ptr;  // rows + 1 entries, monotone
  std::vector<std::uint32_t> col_idx;
  std::vector<T> values;

  std::uint64_t nnz() const { return row_ptr.empty() ? 0 : row_ptr.back(); }
  std::uint32_t degree(std::uint32_t r) const {
    return static_cast<std::uint32_t>(row_ptr[r + 1] - row_ptr[r]);
  }
  void validate() const {
    if (row_ptr.size() != static_cast<std::size_t>(rows) + 1)
      throw std::invalid_argument("CsrMatrix: row_ptr size");
    for (std::uint32_t r = 0; r < rows; ++r)
      if (row_ptr[r] > row_ptr[r + 1]) throw std::invalid_argument("CsrMatrix: row_ptr not monotone");
    if (col_idx.size() != nnz() || values.size() != nnz())
      throw std::invalid_argument("CsrMatrix: nnz mismatch");
    for (std::uint32_t c : col_idx)
      if (c >= cols) throw std::invalid_argument("CsrMatrix: column index out of range");
  }
};

struct DegreeSort {
  std::vector<std::uint32_t> perm;            // sorted position -> original row
  std::vector<std::uint64_t> sorted_row_ptr;  // row pointers in the new order
};

/// Stable ascending-by-degree permutation via counting sort, O(n + max_degree).
DegreeSort degree_sort(std::uint32_t rows, std::span<const std::uint64_t> row_ptr);

template <class T>
DegreeSort degree_sort(const CsrMatrix<T>& m) {
  return degree_sort(m.rows, m.row_ptr);
}

enum class WorkKind : std::uint8_t { HdChunk, LdBatch, MidRow };

struct WorkUnit {
  WorkKind kind;
  std::uint32_t sorted_row = 0;  // LdBatch: first sorted row of the batch; else the row itself
  std::uint32_t row_count = 1;   // LdBatch only
  std::uint64_t nz_begin = 0;    // HdChunk: absolute nonzero range in the source matrix
  std::uint64_t nz_end = 0;
  std::uint32_t partial_slot = 0;  // HdChunk: slot in the partial-sum buffer
};

struct LdGroup {
  std::uint32_t degree;
  std::uint32_t row_begin;  // sorted-row range [row_begin, row_end)
  std::uint32_t row_end;
};

/// Degree-polarized execution plan. High-degree rows split 32 ways with a
/// per-row reduction; low-degree rows batched so every unit carries close to
/// nz_budget nonzeros; the band in between runs one unit per row. Work units
/// cover every nonzero exactly once.
struct SpmmPlan {
  std::uint32_t rows = 0;
  std::uint64_t nnz = 0;
  std::vector<std::uint32_t> perm;
  std::vector<std::uint32_t> inv_perm;
  std::vector<std::uint64_t> sorted_row_ptr;
  std::vector<std::uint32_t> hd_rows;   // sorted-row indices, ascending
  std::vector<LdGroup> ld_groups;       // one per distinct degree in 1..ld_threshold
  std::vector<std::uint32_t> mid_rows;  // sorted-row indices
  std::vector<WorkUnit> work_units;
  std::uint32_t hd_threshold = 512;
  std::uint32_t ld_threshold = 12;
  std::uint32_t nz_budget = 96;
  std::uint32_t ld_row_begin = 0;  // staging range over sorted rows (degree >= 1 only)
  std::uint32_t ld_row_end = 0;
  unsigned workers = 0;
};

inline constexpr std::uint32_t kHdChunksPerRow = 32;

SpmmPlan build_plan(std::uint32_t rows, std::span<const std::uint64_t> row_ptr, unsigned workers,
                    std::uint32_t hd_threshold = 512, std::uint32_t ld_threshold = 12,
                    std::uint32_t nz_budget = 96);

template <class T>
SpmmPlan build_plan(const CsrMatrix<T>& m, unsigned workers, std::uint32_t hd_threshold = 512,
                    std::uint32_t ld_threshold = 12, std::uint32_t nz_budget = 96) {
  return build_plan(m.rows, m.row_ptr, workers, hd_threshold, ld_threshold, nz_budget);
}

/// out = m * dense, with dense and out row-major (m.cols x f and m.rows x f).
/// Work units run concurrently and write disjoint slots; chunk reductions use
/// a fixed order, so output is bitwise reproducible for a fixed plan
/// regardless of the worker count. pool == nullptr runs inline.
template <class T>
void execute(const SpmmPlan& plan, const CsrMatrix<T>& m, const T* dense, std::uint32_t f, T* out,
             WorkerPool* pool = nullptr) {
  if (m.rows != plan.rows || m.nnz() != plan.nnz)
    throw std::invalid_argument("spmm::execute: plan does not match matrix");

  const std::uint32_t n_ld_rows = plan.ld_row_end - plan.ld_row_begin;
  std::vector<T> staging(static_cast<std::size_t>(n_ld_rows) * f);
  std::vector<T> partials(plan.hd_rows.size() * static_cast<std::size_t>(kHdChunksPerRow) * f);
  std::fill(out, out + static_cast<std::size_t>(m.rows) * f, T(0));

  auto accumulate = [&](T* dst, std::uint64_t nz_begin, std::uint64_t nz_end) {
    std::fill(dst, dst + f, T(0));
    for (std::uint64_t e = nz_begin; e < nz_end; ++e) {
      const T v = m.values[e];
      const T* src = dense + static_cast<std::size_t>(m.col_idx[e]) * f;
      for (std::uint32_t c = 0; c < f; ++c) dst[c] += v * src[c];
    }
  };

  auto phase1 = [&](std::size_t ui) {
    const WorkUnit& u = plan.work_units[ui];
    switch (u.kind) {
      case WorkKind::LdBatch:
        for (std::uint32_t s = u.sorted_row; s < u.sorted_row + u.row_count; ++s) {
          const std::uint32_t r = plan.perm[s];
          accumulate(staging.data() + static_cast<std::size_t>(s - plan.ld_row_begin) * f,
                     m.row_ptr[r], m.row_ptr[r + 1]);
        }
        break;
      case WorkKind::MidRow: {
        const std::uint32_t r = plan.perm[u.sorted_row];
        accumulate(out + static_cast<std::size_t>(r) * f, m.row_ptr[r], m.row_ptr[r + 1]);
        break;
      }
      case WorkKind::HdChunk:
        accumulate(partials.data() + static_cast<std::size_t>(u.partial_slot) * f, u.nz_begin,
                   u.nz_end);
        break;
    }
  };

  // Phase 2: per-row reduction of HD partial sums (fixed ascending chunk
  // order) and one scatter of the contiguous LD staging area.
  auto phase2 = [&](std::size_t i) {
    if (i < plan.hd_rows.size()) {
      const std::uint32_t r = plan.perm[plan.hd_rows[i]];
      T* dst = out + static_cast<std::size_t>(r) * f;
      const T* p = partials.data() + i * static_cast<std::size_t>(kHdChunksPerRow) * f;
      for (std::uint32_t c = 0; c < kHdChunksPerRow; ++c)
        for (std::uint32_t j = 0; j < f; ++j) dst[j] += p[static_cast<std::size_t>(c) * f + j];
    } else {
      const std::uint32_t s = plan.ld_row_begin + static_cast<std::uint32_t>(i - plan.hd_rows.size());
      const T* src = staging.data() + static_cast<std::size_t>(s - plan.ld_row_begin) * f;
      std::copy(src, src + f, out + static_cast<std::size_t>(plan.perm[s]) * f);
    }
  };

  if (pool != nullptr) {
    pool->for_each(plan.work_units.size(), phase1);
    pool->for_each(plan.hd_rows.size() + n_ld_rows, phase2);
  } else {
    for (std::size_t i = 0; i < plan.work_units.size(); ++i) phase1(i);
    for (std::size_t i = 0; i < plan.hd_rows.size() + n_ld_rows; ++i) phase2(i);
  }
}

template <class T>
std::vector<T> execute(const SpmmPlan& plan, const CsrMatrix<T>& m, const std::vector<T>& dense,
                       std::uint32_t f, WorkerPool* pool = nullptr) {
  if (dense.size() != static_cast<std::size_t>(m.cols) * f)
    throw std::invalid_argument("spmm::execute: dense shape mismatch");
  std::vector<T> out(static_cast<std::size_t>(m.rows) * f);
  execute(plan, m, dense.data(), f, out.data(), pool);
  return out;
}

/// Oracle and benchmark baseline: plain row loop, no degree scheduling.
template <class T>
void reference_spmm(const CsrMatrix<T>& m, const T* dense, std::uint32_t f, T* out) {
  for (std::uint32_t r = 0; r < m.rows; ++r) {
    T* dst = out + static_cast<std::size_t>(r) * f;
    std::fill(dst, dst + f, T(0));
    for (std::uint64_t e = m.row_ptr[r]; e < m.row_ptr[r + 1]; ++e) {
      const T v = m.values[e];
      const T* src = dense + static_cast<std::size_t>(m.col_idx[e]) * f;
      for (std::uint32_t c = 0; c < f; ++c) dst[c] += v * src[c];
    }
  }
}

template <class T>
std::vector<T> reference_spmm(const CsrMatrix<T>& m, const std::vector<T>& dense, std::uint32_t f) {
  if (dense.size() != static_cast<std::size_t>(m.cols) * f)
    throw std::invalid_argument("spmm::reference_spmm: dense shape mismatch");
  std::vector<T> out(static_cast<std::size_t>(m.rows) * f);
  reference_spmm(m, dense.data(), f, out.data());
  return out;
}

/// Row-parallel baseline: rows split into contiguous equal-count blocks, one
/// block per worker, no degree information.
template <class T>
void row_parallel_reference(const CsrMatrix<T>& m, const T* dense, std::uint32_t f, T* out,
                            WorkerPool& pool) {
  const unsigned blocks = pool.workers();
  pool.for_each(blocks, [&](std::size_t b) {
    const std::uint32_t begin = static_cast<std::uint32_t>(m.rows * (b + 0) / blocks);
    const std::uint32_t end = static_cast<std::uint32_t>(m.rows * (b + 1) / blocks);
    for (std::uint32_t r = begin; r < end; ++r) {
      T* dst = out + static_cast<std::size_t>(r) * f;
      std::fill(dst, dst + f, T(0));
      for (std::uint64_t e = m.row_ptr[r]; e < m.row_ptr[r + 1]; ++e) {
        const T v = m.values[e];
        const T* src = dense + static_cast<std::size_t>(m.col_idx[e]) * f;
        for (std::uint32_t c = 0; c < f; ++c) dst[c] += v * src[c];
      }
    }
  });
}

struct BenchReport {
  double plan_ms = 0;
  double exec_ms = 0;
  double baseline_ms = 0;
  double speedup = 0;  // baseline_ms / exec_ms
  unsigned workers = 0;
  int reps = 0;
};

/// Median-of-reps timing of the planned engine against the row-parallel
/// baseline, same pool, f columns of pseudorandom dense input.
BenchReport bench(const CsrMatrix<float>& m, std::uint32_t f, int reps, WorkerPool* pool = nullptr);

}  // namespace aigsage::spmm
