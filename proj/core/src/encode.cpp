// SPDX-License-Identifier: Apache-2.0
#include "aigsage/encode.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace aigsage {

std::array<std::uint8_t, 4> po_feature(bool driver_inverted) {
  return {0, static_cast<std::uint8_t>(driver_inverted ? 1 : 0), 1, 1};
}

void build_symmetric_csr(std::uint32_t n,
                         const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                         std::vector<std::uint64_t>& row_ptr, std::vector<std::uint32_t>& col_idx) {
  row_ptr.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    ++row_ptr[u + 1];
    ++row_ptr[v + 1];
  }
  for (std::uint32_t i = 0; i < n; ++i) row_ptr[i + 1] += row_ptr[i];
  col_idx.resize(row_ptr[n]);
  std::vector<std::uint64_t> cursor(row_ptr.begin(), row_ptr.end() - 1);
  for (const auto& [u, v] : edges) {
    col_idx[cursor[u]++] = v;
    col_idx[cursor[v]++] = u;
  }
  for (std::uint32_t i = 0; i < n; ++i)
    std::sort(col_idx.begin() + row_ptr[i], col_idx.begin() + row_ptr[i + 1]);
}

EdaGraph encode(const Aig& g, const GroundTruth& gt) {
  const std::uint32_t num_pos = static_cast<std::uint32_t>(g.outputs().size());
  const std::uint32_t n = g.num_nodes() + num_pos;
  if (gt.labels.size() != n)
    throw std::invalid_argument("encode: label count does not match encoded node count");

  EdaGraph eg;
  eg.n = n;
  eg.labels = gt.labels;
  eg.features.assign(static_cast<std::size_t>(n) * 4, 0);

  // Constant and input nodes are sourceless: all-zero feature rows.
  for (std::uint32_t v = g.first_and(); v < g.num_nodes(); ++v) {
    const AndNode& nd = g.and_node(v);
    std::uint8_t* f = &eg.features[4 * v];
    f[0] = 1;
    f[1] = 1;
    f[2] = nd.left.inverted ? 1 : 0;
    f[3] = nd.right.inverted ? 1 : 0;
    eg.fwd_edges.emplace_back(nd.left.node, v);
    eg.fwd_edges.emplace_back(nd.right.node, v);
  }
  for (std::uint32_t k = 0; k < num_pos; ++k) {
    const Literal& d = g.outputs()[k];
    const std::uint32_t po = g.num_nodes() + k;
    const auto f = po_feature(d.inverted);
    std::copy(f.begin(), f.end(), eg.features.begin() + 4 * po);
    eg.fwd_edges.emplace_back(d.node, po);
  }

  build_symmetric_csr(n, eg.fwd_edges, eg.row_ptr, eg.col_idx);
  eg.degree.resize(n);
  for (std::uint32_t v = 0; v < n; ++v)
    eg.degree[v] = static_cast<std::uint32_t>(eg.row_ptr[v + 1] - eg.row_ptr[v]);
  return eg;
}

EdaGraph batch(const EdaGraph& g, std::uint32_t copies) {
  if (copies < 1) throw std::invalid_argument("batch: copy count must be >= 1");
  if (copies == 1) return g;

  EdaGraph out;
  out.n = g.n * copies;
  const std::uint64_t nnz = g.row_ptr.back();
  out.row_ptr.resize(static_cast<std::size_t>(out.n) + 1);
  out.col_idx.resize(nnz * copies);
  out.features.resize(static_cast<std::size_t>(out.n) * 4);
  out.labels.resize(out.n);
  out.degree.resize(out.n);
  out.fwd_edges.reserve(g.fwd_edges.size() * copies);

  for (std::uint32_t k = 0; k < copies; ++k) {
    const std::uint32_t node_off = k * g.n;
    const std::uint64_t nz_off = k * nnz;
    for (std::uint32_t v = 0; v < g.n; ++v) {
      out.row_ptr[node_off + v] = nz_off + g.row_ptr[v];
      out.degree[node_off + v] = g.degree[v];
      out.labels[node_off + v] = g.labels[v];
      std::copy(g.features.begin() + 4 * v, g.features.begin() + 4 * v + 4,
                out.features.begin() + 4 * static_cast<std::size_t>(node_off + v));
    }
    for (std::uint64_t e = 0; e < nnz; ++e)
      out.col_idx[nz_off + e] = g.col_idx[e] + node_off;
    for (const auto& [u, v] : g.fwd_edges)
      out.fwd_edges.emplace_back(u + node_off, v + node_off);
  }
  out.row_ptr[out.n] = nnz * copies;
  return out;
}

void write_edge_list(const std::string& path, const EdaGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  for (const auto& [u, v] : g.fwd_edges) out << u << ' ' << v << '\n';
}

void write_feature_csv(const std::string& path, const EdaGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write feature csv: " + path);
  out << "node,f0,f1,f2,f3,label\n";
  for (std::uint32_t v = 0; v < g.n; ++v) {
    const auto f = g.feature(v);
    out << v << ',' << int(f[0]) << ',' << int(f[1]) << ',' << int(f[2]) << ',' << int(f[3])
        << ',' << int(g.labels[v]) << '\n';
  }
}

}  // namespace aigsage
