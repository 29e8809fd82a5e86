// SPDX-License-Identifier: Apache-2.0
#include "aigsage/partition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace aigsage {

namespace {

void validate_k(std::uint32_t n, std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("partition: k must be >= 1");
  if (k > n) throw std::invalid_argument("partition: k exceeds node count");
}

/// Weighted undirected graph used by the multilevel scheme. Parallel edges of
/// the input adjacency are merged into weights.
struct WGraph {
  std::uint32_t n = 0;
  std::vector<std::uint64_t> xadj;
  std::vector<std::uint32_t> adjncy;
  std::vector<std::uint64_t> adjwgt;
  std::vector<std::uint32_t> vwgt;
};

WGraph from_eda(const EdaGraph& g) {
  WGraph wg;
  wg.n = g.n;
  wg.xadj.assign(g.n + 1, 0);
  wg.vwgt.assign(g.n, 1);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> row;  // (neighbor, weight)
  std::vector<std::uint32_t> tmp;
  for (std::uint32_t u = 0; u < g.n; ++u) {
    tmp.assign(g.col_idx.begin() + g.row_ptr[u], g.col_idx.begin() + g.row_ptr[u + 1]);
    std::sort(tmp.begin(), tmp.end());
    row.clear();
    for (std::uint32_t v : tmp) {
      if (v == u) continue;
      if (!row.empty() && row.back().first == v)
        ++row.back().second;
      else
        row.emplace_back(v, 1);
    }
    for (const auto& [v, w] : row) {
      wg.adjncy.push_back(v);
      wg.adjwgt.push_back(w);
    }
    wg.xadj[u + 1] = wg.adjncy.size();
  }
  return wg;
}

std::uint64_t cut_weight(const WGraph& g, const std::vector<std::uint32_t>& part) {
  std::uint64_t cut = 0;
  for (std::uint32_t u = 0; u < g.n; ++u)
    for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e)
      if (part[g.adjncy[e]] != part[u]) cut += g.adjwgt[e];
  return cut / 2;
}

/// Heavy-edge matching; returns the coarse node count and fills cmap.
std::uint32_t hem_match(const WGraph& g, std::mt19937_64& rng, std::vector<std::uint32_t>& cmap) {
  std::vector<std::uint32_t> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  constexpr std::uint32_t kUnmatched = UINT32_MAX;
  std::vector<std::uint32_t> match(g.n, kUnmatched);
  cmap.assign(g.n, kUnmatched);
  std::uint32_t cn = 0;
  for (std::uint32_t u : order) {
    if (match[u] != kUnmatched) continue;
    std::uint32_t best = kUnmatched;
    std::uint64_t best_w = 0;
    for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
      const std::uint32_t v = g.adjncy[e];
      if (match[v] != kUnmatched || v == u) continue;
      if (g.adjwgt[e] > best_w || (g.adjwgt[e] == best_w && (best == kUnmatched || v < best))) {
        best = v;
        best_w = g.adjwgt[e];
      }
    }
    if (best == kUnmatched) {
      match[u] = u;
      cmap[u] = cn++;
    } else {
      match[u] = best;
      match[best] = u;
      cmap[u] = cmap[best] = cn++;
    }
  }
  return cn;
}

WGraph contract(const WGraph& g, const std::vector<std::uint32_t>& cmap, std::uint32_t cn) {
  WGraph c;
  c.n = cn;
  c.vwgt.assign(cn, 0);
  for (std::uint32_t u = 0; u < g.n; ++u) c.vwgt[cmap[u]] += g.vwgt[u];

  // Group fine nodes by coarse id, then merge sorted neighbor lists.
  std::vector<std::uint32_t> head(cn + 1, 0), members(g.n);
  for (std::uint32_t u = 0; u < g.n; ++u) ++head[cmap[u] + 1];
  for (std::uint32_t i = 0; i < cn; ++i) head[i + 1] += head[i];
  {
    std::vector<std::uint32_t> cursor(head.begin(), head.end() - 1);
    for (std::uint32_t u = 0; u < g.n; ++u) members[cursor[cmap[u]]++] = u;
  }

  c.xadj.assign(cn + 1, 0);
  std::vector<std::pair<std::uint32_t, std::uint64_t>> buf;
  for (std::uint32_t cu = 0; cu < cn; ++cu) {
    buf.clear();
    for (std::uint32_t i = head[cu]; i < head[cu + 1]; ++i) {
      const std::uint32_t u = members[i];
      for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
        const std::uint32_t cv = cmap[g.adjncy[e]];
        if (cv != cu) buf.emplace_back(cv, g.adjwgt[e]);
      }
    }
    std::sort(buf.begin(), buf.end());
    for (std::size_t i = 0; i < buf.size();) {
      std::uint64_t w = 0;
      std::size_t j = i;
      while (j < buf.size() && buf[j].first == buf[i].first) w += buf[j++].second;
      c.adjncy.push_back(buf[i].first);
      c.adjwgt.push_back(w);
      i = j;
    }
    c.xadj[cu + 1] = c.adjncy.size();
  }
  return c;
}

/// Greedy region growing from k seeds; the lightest part claims the next node.
std::vector<std::uint32_t> initial_partition(const WGraph& g, std::uint32_t k, std::mt19937_64& rng) {
  std::vector<std::uint32_t> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  constexpr std::uint32_t kFree = UINT32_MAX;
  std::vector<std::uint32_t> part(g.n, kFree);
  std::vector<std::uint64_t> weight(k, 0);
  std::vector<std::vector<std::uint32_t>> frontier(k);

  std::uint32_t assigned = 0;
  for (std::uint32_t p = 0; p < k; ++p) {
    const std::uint32_t seed = order[p];
    part[seed] = p;
    weight[p] += g.vwgt[seed];
    ++assigned;
    for (std::uint64_t e = g.xadj[seed]; e < g.xadj[seed + 1]; ++e)
      frontier[p].push_back(g.adjncy[e]);
  }

  std::size_t fallback = k;  // next unassigned candidate in `order`
  while (assigned < g.n) {
    std::uint32_t p = 0;
    for (std::uint32_t q = 1; q < k; ++q)
      if (weight[q] < weight[p]) p = q;
    std::uint32_t u = kFree;
    auto& fr = frontier[p];
    while (!fr.empty()) {
      const std::uint32_t cand = fr.back();
      fr.pop_back();
      if (part[cand] == kFree) {
        u = cand;
        break;
      }
    }
    if (u == kFree) {
      while (fallback < g.n && part[order[fallback]] != kFree) ++fallback;
      if (fallback >= g.n) {
        // Frontier exhausted for the lightest part; grab any unassigned node.
        for (std::uint32_t v = 0; v < g.n && u == kFree; ++v)
          if (part[v] == kFree) u = v;
      } else {
        u = order[fallback];
      }
    }
    part[u] = p;
    weight[p] += g.vwgt[u];
    ++assigned;
    for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e)
      if (part[g.adjncy[e]] == kFree) fr.push_back(g.adjncy[e]);
  }
  return part;
}

std::vector<std::uint64_t> part_weights(const WGraph& g, const std::vector<std::uint32_t>& part,
                                        std::uint32_t k) {
  std::vector<std::uint64_t> w(k, 0);
  for (std::uint32_t u = 0; u < g.n; ++u) w[part[u]] += g.vwgt[u];
  return w;
}

std::vector<std::uint32_t> part_counts(const std::vector<std::uint32_t>& part, std::uint32_t k) {
  std::vector<std::uint32_t> c(k, 0);
  for (std::uint32_t p : part) ++c[p];
  return c;
}

/// Greedy boundary moves: shift a node to the adjacent part with the largest
/// connectivity gain when that respects the balance cap and keeps the source
/// part nonempty.
void refine(const WGraph& g, std::vector<std::uint32_t>& part, std::uint32_t k, std::uint64_t cap,
            std::mt19937_64& rng, int passes) {
  std::vector<std::uint64_t> weight = part_weights(g, part, k);
  std::vector<std::uint32_t> count = part_counts(part, k);
  std::vector<std::uint32_t> order(g.n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<std::pair<std::uint32_t, std::uint64_t>> conn;  // (part, weight)
  for (int pass = 0; pass < passes; ++pass) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::uint32_t u : order) {
      const std::uint32_t pu = part[u];
      conn.clear();
      for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
        const std::uint32_t pv = part[g.adjncy[e]];
        bool found = false;
        for (auto& [p, w] : conn)
          if (p == pv) {
            w += g.adjwgt[e];
            found = true;
            break;
          }
        if (!found) conn.emplace_back(pv, g.adjwgt[e]);
      }
      std::uint64_t own = 0;
      for (const auto& [p, w] : conn)
        if (p == pu) own = w;
      std::uint32_t best = pu;
      std::uint64_t best_w = own;
      for (const auto& [p, w] : conn) {
        if (p == pu) continue;
        if (w > best_w && weight[p] + g.vwgt[u] <= cap) {
          best = p;
          best_w = w;
        }
      }
      if (best != pu && count[pu] > 1) {
        weight[pu] -= g.vwgt[u];
        weight[best] += g.vwgt[u];
        --count[pu];
        ++count[best];
        part[u] = best;
      }
    }
  }
}

/// Enforces the balance cap: repeatedly moves the cheapest boundary node of
/// an overweight part into the lightest part.
void rebalance(const WGraph& g, std::vector<std::uint32_t>& part, std::uint32_t k,
               std::uint64_t cap) {
  std::vector<std::uint64_t> weight = part_weights(g, part, k);
  std::vector<std::uint32_t> count = part_counts(part, k);
  for (;;) {
    std::uint32_t heavy = k;
    for (std::uint32_t p = 0; p < k; ++p)
      if (weight[p] > cap && (heavy == k || weight[p] > weight[heavy])) heavy = p;
    if (heavy == k) return;
    std::uint32_t light = 0;
    for (std::uint32_t p = 1; p < k; ++p)
      if (weight[p] < weight[light]) light = p;

    // Prefer a node with the most connectivity into the target part.
    std::uint32_t pick = UINT32_MAX;
    std::int64_t pick_score = INT64_MIN;
    for (std::uint32_t u = 0; u < g.n; ++u) {
      if (part[u] != heavy) continue;
      std::int64_t score = 0;
      for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
        const std::uint32_t pv = part[g.adjncy[e]];
        if (pv == light)
          score += static_cast<std::int64_t>(g.adjwgt[e]);
        else if (pv == heavy)
          score -= static_cast<std::int64_t>(g.adjwgt[e]);
      }
      if (score > pick_score) {
        pick_score = score;
        pick = u;
      }
    }
    if (pick == UINT32_MAX || count[heavy] <= 1) return;
    weight[heavy] -= g.vwgt[pick];
    weight[light] += g.vwgt[pick];
    --count[heavy];
    ++count[light];
    part[pick] = light;
  }
}

}  // namespace

PartitionAssignment partition_topo_chunks(const EdaGraph& g, std::uint32_t k) {
  validate_k(g.n, k);
  PartitionAssignment pa;
  pa.k = k;
  pa.part_of.resize(g.n);
  for (std::uint32_t p = 0; p < k; ++p) {
    const std::uint64_t begin = static_cast<std::uint64_t>(g.n) * p / k;
    const std::uint64_t end = static_cast<std::uint64_t>(g.n) * (p + 1) / k;
    for (std::uint64_t v = begin; v < end; ++v) pa.part_of[v] = p;
  }
  return pa;
}

PartitionAssignment partition_multilevel(const EdaGraph& g, std::uint32_t k, std::uint64_t seed) {
  validate_k(g.n, k);
  PartitionAssignment pa;
  pa.k = k;
  if (k == 1) {
    pa.part_of.assign(g.n, 0);
    return pa;
  }
  if (k == g.n) {
    pa.part_of.resize(g.n);
    std::iota(pa.part_of.begin(), pa.part_of.end(), 0);
    return pa;
  }

  const std::uint64_t cap =
      static_cast<std::uint64_t>(std::ceil(1.05 * static_cast<double>(g.n) / k));
  std::mt19937_64 rng(seed);

  std::vector<WGraph> levels;
  std::vector<std::vector<std::uint32_t>> cmaps;
  levels.push_back(from_eda(g));
  const std::uint32_t coarse_target = std::max<std::uint32_t>(40, 2 * k);
  while (levels.back().n > coarse_target) {
    std::vector<std::uint32_t> cmap;
    const std::uint32_t cn = hem_match(levels.back(), rng, cmap);
    if (cn >= levels.back().n * 95 / 100) break;  // matching stalled
    levels.push_back(contract(levels.back(), cmap, cn));
    cmaps.push_back(std::move(cmap));
  }

  std::vector<std::uint32_t> part = initial_partition(levels.back(), k, rng);
  rebalance(levels.back(), part, k, cap);
  refine(levels.back(), part, k, cap, rng, 2);

  for (std::size_t lvl = levels.size() - 1; lvl-- > 0;) {
    std::vector<std::uint32_t> fine(levels[lvl].n);
    for (std::uint32_t u = 0; u < levels[lvl].n; ++u) fine[u] = part[cmaps[lvl][u]];
    part = std::move(fine);
    refine(levels[lvl], part, k, cap, rng, 2);
    rebalance(levels[lvl], part, k, cap);
  }
  refine(levels[0], part, k, cap, rng, 2);
  rebalance(levels[0], part, k, cap);

  // Second candidate: the levelization chunks, refined the same way. The
  // cheaper cut wins; on circuit graphs the chunk order is often strong.
  std::vector<std::uint32_t> topo = partition_topo_chunks(g, k).part_of;
  refine(levels[0], topo, k, cap, rng, 2);
  rebalance(levels[0], topo, k, cap);

  pa.part_of = cut_weight(levels[0], topo) < cut_weight(levels[0], part) ? std::move(topo)
                                                                         : std::move(part);
  return pa;
}

PartitionAssignment load_assignment(const std::string& path, std::uint32_t n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open assignment file: " + path);
  PartitionAssignment pa;
  pa.part_of.assign(n, 0);
  std::vector<std::uint8_t> seen(n, 0);
  std::uint64_t node, part;
  while (in >> node >> part) {
    if (node >= n) throw std::runtime_error("assignment: node id out of range");
    if (seen[node]) throw std::runtime_error("assignment: duplicate node " + std::to_string(node));
    seen[node] = 1;
    pa.part_of[node] = static_cast<std::uint32_t>(part);
  }
  for (std::uint32_t v = 0; v < n; ++v)
    if (!seen[v]) throw std::runtime_error("assignment: missing node " + std::to_string(v));
  std::uint32_t k = 0;
  for (std::uint32_t p : pa.part_of) k = std::max(k, p + 1);
  std::vector<std::uint8_t> nonempty(k, 0);
  for (std::uint32_t p : pa.part_of) nonempty[p] = 1;
  for (std::uint32_t p = 0; p < k; ++p)
    if (!nonempty[p]) throw std::runtime_error("assignment: empty partition " + std::to_string(p));
  pa.k = k;
  return pa;
}

void save_assignment(const std::string& path, const PartitionAssignment& pa) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write assignment file: " + path);
  for (std::size_t v = 0; v < pa.part_of.size(); ++v) out << v << ' ' << pa.part_of[v] << '\n';
}

namespace {

std::vector<AugmentedPartition> build_partitions(const EdaGraph& g, const PartitionAssignment& pa,
                                                 bool with_boundary) {
  if (pa.part_of.size() != g.n) throw std::invalid_argument("regrow: assignment size mismatch");
  const std::uint32_t k = pa.k;
  std::vector<AugmentedPartition> parts(k);

  for (std::uint32_t v = 0; v < g.n; ++v) parts[pa.part_of[v]].core_nodes.push_back(v);

  if (with_boundary) {
    // B_p: neighbors of S_p outside S_p, collected per part.
    std::vector<std::vector<std::uint32_t>> boundary(k);
    for (std::uint32_t v = 0; v < g.n; ++v) {
      const std::uint32_t pv = pa.part_of[v];
      for (std::uint64_t e = g.row_ptr[v]; e < g.row_ptr[v + 1]; ++e) {
        const std::uint32_t u = g.col_idx[e];
        if (pa.part_of[u] != pv) boundary[pv].push_back(u);
      }
    }
    for (std::uint32_t p = 0; p < k; ++p) {
      auto& b = boundary[p];
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
      parts[p].boundary_nodes = std::move(b);
    }
  }

  for (std::uint32_t p = 0; p < k; ++p) {
    AugmentedPartition& ap = parts[p];
    ap.local_to_global = ap.core_nodes;
    ap.local_to_global.insert(ap.local_to_global.end(), ap.boundary_nodes.begin(),
                              ap.boundary_nodes.end());
    ap.local_index.reserve(ap.local_to_global.size());
    for (std::uint32_t i = 0; i < ap.local_to_global.size(); ++i)
      ap.local_index.emplace(ap.local_to_global[i], i);
    ap.core_mask.assign(ap.local_to_global.size(), 0);
    std::fill(ap.core_mask.begin(), ap.core_mask.begin() + ap.core_nodes.size(), 1);
  }

  // E[S_p] plus, when regrowing, the crossing edges C_p (these appear in the
  // two partitions that share them).
  for (const auto& [u, v] : g.fwd_edges) {
    const std::uint32_t pu = pa.part_of[u];
    const std::uint32_t pv = pa.part_of[v];
    if (pu == pv) {
      AugmentedPartition& ap = parts[pu];
      ap.edges.emplace_back(ap.local_index.at(u), ap.local_index.at(v));
    } else if (with_boundary) {
      AugmentedPartition& a = parts[pu];
      a.edges.emplace_back(a.local_index.at(u), a.local_index.at(v));
      AugmentedPartition& b = parts[pv];
      b.edges.emplace_back(b.local_index.at(u), b.local_index.at(v));
    }
  }
  return parts;
}

}  // namespace

std::vector<AugmentedPartition> regrow(const EdaGraph& g, const PartitionAssignment& pa) {
  return build_partitions(g, pa, true);
}

std::vector<AugmentedPartition> core_subgraphs(const EdaGraph& g, const PartitionAssignment& pa) {
  return build_partitions(g, pa, false);
}

double crossing_fraction(const EdaGraph& g, const PartitionAssignment& pa) {
  if (g.fwd_edges.empty()) return 0.0;
  std::uint64_t crossing = 0;
  for (const auto& [u, v] : g.fwd_edges)
    if (pa.part_of[u] != pa.part_of[v]) ++crossing;
  return static_cast<double>(crossing) / static_cast<double>(g.fwd_edges.size());
}

std::uint64_t footprint_proxy(const std::vector<AugmentedPartition>& parts,
                              std::uint32_t feature_cols, std::uint32_t hidden_dim) {
  std::uint64_t peak = 0;
  for (const AugmentedPartition& p : parts) {
    const std::uint64_t bytes =
        static_cast<std::uint64_t>(p.size()) * (feature_cols + hidden_dim) * 4 +
        2 * static_cast<std::uint64_t>(p.edges.size()) * 8;
    peak = std::max(peak, bytes);
  }
  return peak;
}

EdaGraph materialize(const EdaGraph& g, const AugmentedPartition& part) {
  EdaGraph out;
  out.n = part.size();
  out.fwd_edges = part.edges;
  out.features.resize(static_cast<std::size_t>(out.n) * 4);
  out.labels.resize(out.n);
  for (std::uint32_t i = 0; i < out.n; ++i) {
    const std::uint32_t v = part.local_to_global[i];
    std::copy(g.features.begin() + 4 * static_cast<std::size_t>(v),
              g.features.begin() + 4 * static_cast<std::size_t>(v) + 4,
              out.features.begin() + 4 * static_cast<std::size_t>(i));
    out.labels[i] = g.labels[v];
  }
  build_symmetric_csr(out.n, out.fwd_edges, out.row_ptr, out.col_idx);
  out.degree.resize(out.n);
  for (std::uint32_t v = 0; v < out.n; ++v)
    out.degree[v] = static_cast<std::uint32_t>(out.row_ptr[v + 1] - out.row_ptr[v]);
  return out;
}

std::uint64_t edge_cut(const EdaGraph& g, const PartitionAssignment& pa) {
  std::uint64_t cut = 0;
  for (const auto& [u, v] : g.fwd_edges)
    if (pa.part_of[u] != pa.part_of[v]) ++cut;
  return cut;
}

}  // namespace aigsage
