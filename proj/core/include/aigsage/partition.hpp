// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aigsage/encode.hpp"

namespace aigsage {

struct PartitionAssignment {
  std::vector<std::uint32_t> part_of;  // one id per node, all < k
  std::uint32_t k = 0;
};

/// One partition after boundary re-growth: the core node set S_p, the 1-hop
/// boundary B_p = N(S_p) \ S_p, and the local edge list E_p+ = E[S_p] u C_p
/// where C_p holds the edges crossing between S_p and B_p. Local ids list
/// cores first (ascending global id), then boundary nodes.
struct AugmentedPartition {
  std::vector<std::uint32_t> core_nodes;
  std::vector<std::uint32_t> boundary_nodes;
  std::vector<std::uint32_t> local_to_global;
  std::unordered_map<std::uint32_t, std::uint32_t> local_index;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // local ids, forward orientation
  std::vector<std::uint8_t> core_mask;

  std::uint32_t num_core() const { return static_cast<std::uint32_t>(core_nodes.size()); }
  std::uint32_t size() const { return static_cast<std::uint32_t>(local_to_global.size()); }
};

/// Contiguous node-index ranges of near-equal size. AIG node order is
/// topological, so chunks respect circuit levelization.
PartitionAssignment partition_topo_chunks(const EdaGraph& g, std::uint32_t k);

/// Built-in multilevel scheme: heavy-edge-matching coarsening, greedy
/// initial partitioning, and two passes of greedy boundary refinement per
/// level. Max part size <= ceil(1.05 * n / k); deterministic per seed.
PartitionAssignment partition_multilevel(const EdaGraph& g, std::uint32_t k, std::uint64_t seed);

/// Assignment files hold one "node_id part_id" pair per line and must cover
/// every node exactly once with no empty partition.
PartitionAssignment load_assignment(const std::string& path, std::uint32_t n);
void save_assignment(const std::string& path, const PartitionAssignment& pa);

/// Boundary edge re-growth, one augmented partition per part.
std::vector<AugmentedPartition> regrow(const EdaGraph& g, const PartitionAssignment& pa);

/// Ablation variant: cores only, E_p = E[S_p], no boundary nodes.
std::vector<AugmentedPartition> core_subgraphs(const EdaGraph& g, const PartitionAssignment& pa);

/// Fraction of directed forward edges whose endpoints lie in different parts.
double crossing_fraction(const EdaGraph& g, const PartitionAssignment& pa);

/// Bytes estimate of the largest augmented partition:
/// max_p [ |S_p+| * (feature_cols + hidden_dim) * 4 + 2 * |E_p+| * 8 ].
std::uint64_t footprint_proxy(const std::vector<AugmentedPartition>& parts,
                              std::uint32_t feature_cols = 4, std::uint32_t hidden_dim = 32);

/// Gathers a partition into a standalone EdaGraph (local CSR, features,
/// labels). With k=1 this reproduces the input graph bit for bit.
EdaGraph materialize(const EdaGraph& g, const AugmentedPartition& part);

// Edge-cut over undirected edges, for diagnostics and tests.
std::uint64_t edge_cut(const EdaGraph& g, const PartitionAssignment& pa);

}  // namespace aigsage
