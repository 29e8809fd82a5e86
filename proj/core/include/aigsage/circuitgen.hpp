// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "aigsage/aig.hpp"

namespace aigsage {

/// Node classes used as classification labels.
enum class NodeClass : std::uint8_t { Po = 0, Maj = 1, Xor = 2, And = 3, Pi = 4 };
inline constexpr std::uint32_t kNumClasses = 5;

/// Per-node labels over the encoded node range (constant, inputs, ANDs and
/// the virtual output nodes appended after the AND section), plus the
/// structural support of every XOR/MAJ root for the verifier.
struct GroundTruth {
  std::vector<std::uint8_t> labels;
  std::vector<std::uint32_t> po_nodes;
  std::map<std::uint32_t, std::vector<Literal>> supports;
};

/// Grows an Aig together with its labels and recorded root supports.
class AigBuilder {
 public:
  explicit AigBuilder(std::uint32_t num_inputs);

  Literal input(std::uint32_t i) const;  // 0-based
  Literal add_and(Literal left, Literal right, NodeClass cls = NodeClass::And);
  void set_support(Literal root, std::vector<Literal> support);

  const Aig& aig() const { return aig_; }

  /// Appends the outputs as labeled PO nodes and returns the finished pair.
  std::pair<Aig, GroundTruth> finish(const std::vector<Literal>& outputs);

 private:
  Aig aig_;
  GroundTruth gt_;
};

/// sum = XOR2(a,b) as three AND nodes sharing the carry; carry = AND(a,b).
/// The sum root is labeled XOR, the carry MAJ, the interior node AND.
std::pair<Literal, Literal> gen_half_adder(Literal a, Literal b, AigBuilder& builder);

/// sum = XOR3(a,b,cin) as cascaded XOR2 (only the final root labeled XOR);
/// carry = MAJ(a,b,cin) from 2-input ANDs and inverters (root labeled MAJ,
/// carry literal is complemented).
std::pair<Literal, Literal> gen_full_adder(Literal a, Literal b, Literal cin, AigBuilder& builder);

struct CsaCircuit {
  Aig aig;
  GroundTruth gt;
  std::uint32_t width = 0;
  std::uint32_t half_adders = 0;
  std::uint32_t full_adders = 0;
};

/// Carry-save array multiplier over two width-bit operands; the last carry
/// row is rippled. Inputs are a0..a_{w-1} then b0..b_{w-1}, outputs
/// m0..m_{2w-1}. Node and edge counts grow with width^2.
CsaCircuit gen_csa_multiplier(std::uint32_t width);

/// Copy of g with exactly one fanin inversion flag flipped on an AND node
/// reachable from the outputs. Deterministic per seed.
Aig mutate(const Aig& g, std::uint64_t seed);

// Label and support files: one "node_id value" pair per line.
void write_labels(const std::string& path, const std::vector<std::uint8_t>& labels);
std::vector<std::uint8_t> load_labels(const std::string& path, std::size_t expected_nodes);
void write_supports(const std::string& path, const std::map<std::uint32_t, std::vector<Literal>>& supports);
std::map<std::uint32_t, std::vector<Literal>> load_supports(const std::string& path);

}  // namespace aigsage
