// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aigsage/aig.hpp"
#include "aigsage/circuitgen.hpp"

namespace aigsage {

/// Learning-ready graph: symmetric CSR adjacency over constant, input, AND
/// and virtual output nodes; a 4-bit feature per node; a class label per
/// node; and the original directed edge list for partition bookkeeping.
struct EdaGraph {
  std::uint32_t n = 0;
  std::vector<std::uint64_t> row_ptr;
  std::vector<std::uint32_t> col_idx;
  std::vector<std::uint8_t> features;  // n x 4, row-major, entries in {0,1}
  std::vector<std::uint8_t> labels;    // entries in 0..4
  std::vector<std::uint32_t> degree;   // row_ptr[i+1] - row_ptr[i]
  std::vector<std::pair<std::uint32_t, std::uint32_t>> fwd_edges;  // (fanin, node), (driver, po)

  std::array<std::uint8_t, 4> feature(std::uint32_t v) const {
    return {features[4 * v], features[4 * v + 1], features[4 * v + 2], features[4 * v + 3]};
  }
  std::uint64_t num_undirected_edges() const { return fwd_edges.size(); }
};

/// The output-node feature rule lives here so it can be revised in one place:
/// [0, X, 1, 1] with X the inversion flag of the driving literal.
std::array<std::uint8_t, 4> po_feature(bool driver_inverted);

/// Builds the EdaGraph for an Aig and its labels. Each AIG fanin edge and
/// each output-driver edge is inserted in both directions.
EdaGraph encode(const Aig& g, const GroundTruth& gt);

/// b disjoint copies; node i of copy k maps to k*n + i.
EdaGraph batch(const EdaGraph& g, std::uint32_t copies);

/// Symmetric CSR from a forward edge list; shared by encode and the
/// partition materializer so identical edge sets give identical arrays.
void build_symmetric_csr(std::uint32_t n,
                         const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                         std::vector<std::uint64_t>& row_ptr, std::vector<std::uint32_t>& col_idx);

// Interop exports.
void write_edge_list(const std::string& path, const EdaGraph& g);
void write_feature_csv(const std::string& path, const EdaGraph& g);

}  // namespace aigsage
