// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "aigsage/aig.hpp"
#include "aigsage/polynomial.hpp"

namespace aigsage {

struct VerifyOptions {
  /// Aborting above this many monomials yields an inconclusive verdict
  /// instead of an unbounded expansion.
  std::size_t monomial_cap = 2'000'000;
};

struct VerifyReport {
  bool equivalent = false;
  bool inconclusive = false;
  Polynomial residual;  // implementation word polynomial minus the spec; zero iff equivalent
  std::uint64_t substitution_count = 0;  // gate variables eliminated
  std::uint64_t shortcut_count = 0;      // XOR/MAJ pairs collapsed via the x1 + 2*x2 rule
  std::uint64_t fallback_count = 0;      // labeled roots that failed validation
};

/// Backward rewriting of the output word polynomial of a width-bit multiplier
/// candidate, guided by the labels: class-2 roots substitute an XOR2/XOR3
/// model over their support in one step, class-1 roots a MAJ (or AND) model;
/// everything else expands gate by gate with the basic operator models.
///
/// Every labeled substitution is first validated against the local truth
/// table of the root's cut, so wrong labels cost speed but never soundness.
/// Supports may come from a generator or be left empty; roots without a
/// usable support are detected structurally or fall back to gate expansion.
VerifyReport backward_rewrite(const Aig& g, const std::vector<std::uint8_t>& labels,
                              const std::map<std::uint32_t, std::vector<Literal>>& supports,
                              std::uint32_t width, const VerifyOptions& opts = {});

/// Exhaustive simulation against the integer product; limited to 2*width <= 20.
bool truth_table_equiv(const Aig& g, std::uint32_t width);

/// (sum_i 2^i a_i) * (sum_j 2^j b_j) over the multiplier's input variables.
Polynomial multiplier_spec_poly(std::uint32_t width);

}  // namespace aigsage
