// SPDX-License-Identifier: Apache-2.0
#include "aigsage/aig.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aigsage {

std::uint32_t Aig::add_and(Literal left, Literal right) {
  const std::uint32_t index = num_nodes();
  if (left.node >= index || right.node >= index)
    throw std::invalid_argument("Aig::add_and: fanin index must be strictly below the new node");
  ands_.push_back({left, right});
  return index;
}

void Aig::add_output(Literal driver) {
  if (driver.node >= num_nodes())
    throw std::invalid_argument("Aig::add_output: driver references unknown node");
  outputs_.push_back(driver);
}

void Aig::flip_and_fanin(std::uint32_t node, bool right_side) {
  if (!is_and(node)) throw std::invalid_argument("Aig::flip_and_fanin: not an AND node");
  AndNode& a = ands_[node - first_and()];
  Literal& l = right_side ? a.right : a.left;
  l.inverted = !l.inverted;
}

namespace {

std::uint64_t read_number(std::istream& in, const char* what) {
  std::uint64_t v;
  if (!(in >> v)) throw std::runtime_error(std::string("AIGER: missing or bad ") + what);
  return v;
}

Literal decode_literal(std::uint64_t l, std::uint64_t max_var, const char* what) {
  if (l > 2 * max_var + 1)
    throw std::runtime_error(std::string("AIGER: ") + what + " literal out of range");
  return {static_cast<std::uint32_t>(l >> 1), (l & 1) != 0};
}

}  // namespace

Aig parse_aiger(std::istream& in) {
  std::string magic;
  if (!(in >> magic)) throw std::runtime_error("AIGER: empty input");
  if (magic != "aag")
    throw std::runtime_error("AIGER: expected ASCII header 'aag', got '" + magic + "'");

  const std::uint64_t m = read_number(in, "M");
  const std::uint64_t i = read_number(in, "I");
  const std::uint64_t l = read_number(in, "L");
  const std::uint64_t o = read_number(in, "O");
  const std::uint64_t a = read_number(in, "A");
  if (l != 0) throw std::runtime_error("AIGER: latches unsupported (sequential circuit)");
  if (m != i + a)
    throw std::runtime_error("AIGER: non-contiguous variable numbering (M != I + A)");

  Aig g(static_cast<std::uint32_t>(i));
  for (std::uint64_t n = 0; n < i; ++n) {
    const std::uint64_t v = read_number(in, "input literal");
    if (v != 2 * (n + 1))
      throw std::runtime_error("AIGER: inputs must be the literals 2..2I in order");
  }

  std::vector<std::uint64_t> output_literals(o);
  for (std::uint64_t n = 0; n < o; ++n) output_literals[n] = read_number(in, "output literal");

  for (std::uint64_t n = 0; n < a; ++n) {
    const std::uint64_t lhs = read_number(in, "AND lhs");
    const std::uint64_t expected = 2 * (i + 1 + n);
    if (lhs != expected)
      throw std::runtime_error("AIGER: AND definitions must appear in ascending index order");
    const Literal left = decode_literal(read_number(in, "AND rhs0"), m, "AND rhs0");
    const Literal right = decode_literal(read_number(in, "AND rhs1"), m, "AND rhs1");
    const std::uint32_t own = static_cast<std::uint32_t>(lhs >> 1);
    if (left.node >= own || right.node >= own)
      throw std::runtime_error("AIGER: fanin index >= own index (cycle)");
    g.add_and(left, right);
  }

  for (std::uint64_t v : output_literals) g.add_output(decode_literal(v, m, "output"));
  // Symbol table and comments, if any, are ignored.
  return g;
}

Aig parse_aiger_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open AIGER file: " + path);
  return parse_aiger(in);
}

void write_aiger(const Aig& g, std::ostream& out) {
  const std::uint32_t i = g.num_inputs();
  const std::uint32_t a = g.num_ands();
  out << "aag " << (i + a) << ' ' << i << " 0 " << g.outputs().size() << ' ' << a << '\n';
  for (std::uint32_t n = 1; n <= i; ++n) out << 2 * n << '\n';
  for (const Literal& d : g.outputs()) out << (2 * d.node + (d.inverted ? 1 : 0)) << '\n';
  for (std::uint32_t n = 0; n < a; ++n) {
    const AndNode& nd = g.and_nodes()[n];
    out << 2 * (i + 1 + n) << ' ' << (2 * nd.left.node + (nd.left.inverted ? 1 : 0)) << ' '
        << (2 * nd.right.node + (nd.right.inverted ? 1 : 0)) << '\n';
  }
}

void write_aiger_file(const Aig& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write AIGER file: " + path);
  write_aiger(g, out);
}

std::vector<std::uint8_t> simulate_nodes(const Aig& g, const std::vector<std::uint8_t>& assignment) {
  if (assignment.size() != g.num_inputs())
    throw std::invalid_argument("simulate: assignment length != number of inputs");
  std::vector<std::uint8_t> value(g.num_nodes(), 0);
  for (std::uint32_t n = 0; n < g.num_inputs(); ++n) value[n + 1] = assignment[n] ? 1 : 0;
  const std::uint32_t first = g.first_and();
  for (std::uint32_t n = 0; n < g.num_ands(); ++n) {
    const AndNode& nd = g.and_nodes()[n];
    const std::uint8_t l = value[nd.left.node] ^ (nd.left.inverted ? 1 : 0);
    const std::uint8_t r = value[nd.right.node] ^ (nd.right.inverted ? 1 : 0);
    value[first + n] = l & r;
  }
  return value;
}

std::vector<std::uint8_t> simulate(const Aig& g, const std::vector<std::uint8_t>& assignment) {
  const std::vector<std::uint8_t> value = simulate_nodes(g, assignment);
  std::vector<std::uint8_t> out(g.outputs().size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const Literal& d = g.outputs()[n];
    out[n] = value[d.node] ^ (d.inverted ? 1 : 0);
  }
  return out;
}

}  // namespace aigsage
