// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace aigsage {

/// One endpoint of an AIG edge: a node index plus an inversion flag.
/// Inversion is an edge attribute, never a node.
struct Literal {
  std::uint32_t node = 0;
  bool inverted = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

inline Literal lit(std::uint32_t node, bool inverted = false) { return {node, inverted}; }
inline Literal operator~(Literal l) { return {l.node, !l.inverted}; }

struct AndNode {
  Literal left;
  Literal right;

  friend bool operator==(const AndNode&, const AndNode&) = default;
};

/// And-Inverter Graph. Node 0 is constant false, inputs occupy 1..num_inputs,
/// AND nodes follow. Fanins always reference strictly lower indices, so the
/// node list is topologically ordered by construction.
class Aig {
 public:
  Aig() = default;
  explicit Aig(std::uint32_t num_inputs) : num_inputs_(num_inputs) {}

  std::uint32_t num_inputs() const { return num_inputs_; }
  std::uint32_t num_ands() const { return static_cast<std::uint32_t>(ands_.size()); }
  std::uint32_t num_nodes() const { return 1 + num_inputs_ + num_ands(); }
  std::uint32_t first_and() const { return 1 + num_inputs_; }

  bool is_constant(std::uint32_t v) const { return v == 0; }
  bool is_input(std::uint32_t v) const { return v >= 1 && v <= num_inputs_; }
  bool is_and(std::uint32_t v) const { return v >= first_and() && v < num_nodes(); }

  const AndNode& and_node(std::uint32_t v) const { return ands_[v - first_and()]; }
  const std::vector<AndNode>& and_nodes() const { return ands_; }
  const std::vector<Literal>& outputs() const { return outputs_; }

  /// Appends an AND node and returns its index. Both fanins must reference
  /// existing (strictly lower) nodes.
  std::uint32_t add_and(Literal left, Literal right);
  void add_output(Literal driver);

  /// Flips the inversion flag of one fanin of an AND node.
  void flip_and_fanin(std::uint32_t node, bool right_side);

  friend bool operator==(const Aig&, const Aig&) = default;

 private:
  std::uint32_t num_inputs_ = 0;
  std::vector<AndNode> ands_;
  std::vector<Literal> outputs_;
};

/// Parses the ASCII AIGER format, header "aag M I L O A". Latches are
/// rejected; trailing symbol table and comments are ignored.
Aig parse_aiger(std::istream& in);
Aig parse_aiger_file(const std::string& path);

void write_aiger(const Aig& g, std::ostream& out);
void write_aiger_file(const Aig& g, const std::string& path);

/// Evaluates all outputs under one input assignment (assignment[i] drives
/// input node i+1). Bits are 0/1.
std::vector<std::uint8_t> simulate(const Aig& g, const std::vector<std::uint8_t>& assignment);

/// Per-node values under one assignment, indexed by node id.
std::vector<std::uint8_t> simulate_nodes(const Aig& g, const std::vector<std::uint8_t>& assignment);

}  // namespace aigsage
