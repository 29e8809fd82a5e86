// SPDX-License-Identifier: Apache-2.0
#include "aigsage/circuitgen.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace aigsage {

AigBuilder::AigBuilder(std::uint32_t num_inputs) : aig_(num_inputs) {
  gt_.labels.assign(aig_.num_nodes(), static_cast<std::uint8_t>(NodeClass::And));
  for (std::uint32_t i = 1; i <= num_inputs; ++i)
    gt_.labels[i] = static_cast<std::uint8_t>(NodeClass::Pi);
}

Literal AigBuilder::input(std::uint32_t i) const {
  if (i >= aig_.num_inputs()) throw std::out_of_range("AigBuilder::input");
  return lit(i + 1);
}

Literal AigBuilder::add_and(Literal left, Literal right, NodeClass cls) {
  const std::uint32_t v = aig_.add_and(left, right);
  gt_.labels.push_back(static_cast<std::uint8_t>(cls));
  return lit(v);
}

void AigBuilder::set_support(Literal root, std::vector<Literal> support) {
  gt_.supports[root.node] = std::move(support);
}

std::pair<Aig, GroundTruth> AigBuilder::finish(const std::vector<Literal>& outputs) {
  const std::uint32_t first_po = aig_.num_nodes();
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    aig_.add_output(outputs[k]);
    gt_.po_nodes.push_back(first_po + static_cast<std::uint32_t>(k));
    gt_.labels.push_back(static_cast<std::uint8_t>(NodeClass::Po));
  }
  return {std::move(aig_), std::move(gt_)};
}

std::pair<Literal, Literal> gen_half_adder(Literal a, Literal b, AigBuilder& builder) {
  const Literal carry = builder.add_and(a, b, NodeClass::Maj);
  const Literal nor = builder.add_and(~a, ~b, NodeClass::And);
  const Literal sum = builder.add_and(~carry, ~nor, NodeClass::Xor);
  builder.set_support(sum, {a, b});
  builder.set_support(carry, {a, b});
  return {sum, carry};
}

std::pair<Literal, Literal> gen_full_adder(Literal a, Literal b, Literal cin, AigBuilder& builder) {
  const Literal c1 = builder.add_and(a, b, NodeClass::And);
  const Literal n1 = builder.add_and(~a, ~b, NodeClass::And);
  const Literal x1 = builder.add_and(~c1, ~n1, NodeClass::And);  // inner XOR2 root
  const Literal c2 = builder.add_and(x1, cin, NodeClass::And);
  const Literal n2 = builder.add_and(~x1, ~cin, NodeClass::And);
  const Literal sum = builder.add_and(~c2, ~n2, NodeClass::Xor);
  const Literal mj = builder.add_and(~c1, ~c2, NodeClass::Maj);  // computes NOT(MAJ)
  builder.set_support(sum, {a, b, cin});
  builder.set_support(mj, {a, b, cin});
  return {sum, ~mj};
}

CsaCircuit gen_csa_multiplier(std::uint32_t width) {
  if (width < 2) throw std::invalid_argument("gen_csa_multiplier: width must be >= 2");
  const std::uint32_t w = width;
  CsaCircuit out;
  out.width = w;

  AigBuilder b(2 * w);
  auto pp = [&](std::uint32_t i, std::uint32_t j) {
    return b.add_and(b.input(i), b.input(w + j), NodeClass::And);
  };

  // Reduce up to three column bits with an adder; fewer inputs pass through.
  auto reduce = [&](std::vector<Literal>& ins) -> std::pair<Literal, std::optional<Literal>> {
    if (ins.size() == 1) return {ins[0], std::nullopt};
    if (ins.size() == 2) {
      ++out.half_adders;
      auto [s, c] = gen_half_adder(ins[0], ins[1], b);
      return {s, c};
    }
    ++out.full_adders;
    auto [s, c] = gen_full_adder(ins[0], ins[1], ins[2], b);
    return {s, c};
  };

  std::vector<std::optional<Literal>> sums(2 * w), carries(2 * w);
  std::vector<Literal> m(2 * w);

  // Row 0 contributes the raw partial products of a0.
  m[0] = pp(0, 0);
  for (std::uint32_t j = 1; j < w; ++j) sums[j] = pp(0, j);

  // Rows 1..w-1: carry-save addition of one partial-product row each.
  for (std::uint32_t i = 1; i < w; ++i) {
    std::vector<std::optional<Literal>> new_sums(2 * w), new_carries(2 * w);
    for (std::uint32_t j = 0; j < w; ++j) {
      const std::uint32_t c = i + j;
      std::vector<Literal> ins;
      if (sums[c]) ins.push_back(*sums[c]);
      ins.push_back(pp(i, j));
      if (carries[c]) ins.push_back(*carries[c]);
      auto [s, carry] = reduce(ins);
      if (j == 0)
        m[i] = s;
      else
        new_sums[c] = s;
      if (carry) new_carries[c + 1] = *carry;
    }
    sums = std::move(new_sums);
    carries = std::move(new_carries);
  }

  // Final ripple over the remaining sum and carry bits.
  std::optional<Literal> ripple;
  for (std::uint32_t c = w; c < 2 * w; ++c) {
    std::vector<Literal> ins;
    if (sums[c]) ins.push_back(*sums[c]);
    if (carries[c]) ins.push_back(*carries[c]);
    if (ripple) ins.push_back(*ripple);
    auto [s, carry] = reduce(ins);
    m[c] = s;
    ripple = carry;
  }

  auto [aig, gt] = b.finish(m);
  out.aig = std::move(aig);
  out.gt = std::move(gt);
  return out;
}

Aig mutate(const Aig& g, std::uint64_t seed) {
  if (g.num_ands() == 0) throw std::invalid_argument("mutate: graph has no AND nodes");

  // Restrict flips to AND nodes in some output cone so the mutation is
  // functionally visible.
  std::vector<std::uint8_t> reachable(g.num_nodes(), 0);
  std::vector<std::uint32_t> stack;
  for (const Literal& o : g.outputs())
    if (!reachable[o.node]) {
      reachable[o.node] = 1;
      stack.push_back(o.node);
    }
  while (!stack.empty()) {
    const std::uint32_t v = stack.back();
    stack.pop_back();
    if (!g.is_and(v)) continue;
    const AndNode& nd = g.and_node(v);
    for (std::uint32_t child : {nd.left.node, nd.right.node})
      if (!reachable[child]) {
        reachable[child] = 1;
        stack.push_back(child);
      }
  }
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t v = g.first_and(); v < g.num_nodes(); ++v)
    if (reachable[v]) candidates.push_back(v);
  if (candidates.empty()) candidates.assign(1, g.first_and());

  std::mt19937_64 rng(seed);
  const std::uint32_t node =
      candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
  const bool right = std::uniform_int_distribution<int>(0, 1)(rng) != 0;

  Aig mutant = g;
  mutant.flip_and_fanin(node, right);
  return mutant;
}

void write_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write label file: " + path);
  for (std::size_t i = 0; i < labels.size(); ++i)
    out << i << ' ' << static_cast<int>(labels[i]) << '\n';
}

std::vector<std::uint8_t> load_labels(const std::string& path, std::size_t expected_nodes) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path);
  std::vector<std::uint8_t> labels(expected_nodes, 0);
  std::vector<std::uint8_t> seen(expected_nodes, 0);
  std::uint64_t node, label;
  while (in >> node >> label) {
    if (node >= expected_nodes)
      throw std::runtime_error("label file: node id out of range: " + std::to_string(node));
    if (seen[node]) throw std::runtime_error("label file: duplicate node " + std::to_string(node));
    if (label >= kNumClasses)
      throw std::runtime_error("label file: label out of range for node " + std::to_string(node));
    labels[node] = static_cast<std::uint8_t>(label);
    seen[node] = 1;
  }
  for (std::size_t i = 0; i < expected_nodes; ++i)
    if (!seen[i]) throw std::runtime_error("label file: missing node " + std::to_string(i));
  return labels;
}

void write_supports(const std::string& path,
                    const std::map<std::uint32_t, std::vector<Literal>>& supports) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write support file: " + path);
  for (const auto& [root, sup] : supports) {
    out << root << ' ' << sup.size();
    for (const Literal& l : sup) out << ' ' << (2 * l.node + (l.inverted ? 1 : 0));
    out << '\n';
  }
}

std::map<std::uint32_t, std::vector<Literal>> load_supports(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open support file: " + path);
  std::map<std::uint32_t, std::vector<Literal>> supports;
  std::uint32_t root;
  std::size_t arity;
  while (in >> root >> arity) {
    std::vector<Literal> sup(arity);
    for (std::size_t i = 0; i < arity; ++i) {
      std::uint64_t enc;
      if (!(in >> enc)) throw std::runtime_error("support file: truncated entry");
      sup[i] = {static_cast<std::uint32_t>(enc >> 1), (enc & 1) != 0};
    }
    supports[root] = std::move(sup);
  }
  return supports;
}

}  // namespace aigsage
