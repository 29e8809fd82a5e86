// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <vector>

#include "aigsage/aig.hpp"

namespace aigsage {

using BigInt = boost::multiprecision::cpp_int;

/// Multilinear monomial: sorted, duplicate-free variable indices. The empty
/// monomial is the constant term.
using Monomial = std::vector<std::uint32_t>;

/// Multilinear polynomial with arbitrary-precision integer coefficients over
/// 0/1-valued variables (x^2 = x). Zero coefficients are never stored.
class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(BigInt c);
  static Polynomial variable(std::uint32_t v);
  /// x for a plain literal, 1 - x for an inverted one; node 0 is the
  /// constant-false node and maps to 0 or 1 directly.
  static Polynomial from_literal(Literal l);

  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }
  const std::map<Monomial, BigInt>& terms() const { return terms_; }
  BigInt coeff(const Monomial& m) const;

  /// Accumulates c * m, erasing the term if the sum cancels.
  void add_term(const Monomial& m, const BigInt& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& scale(const BigInt& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// Value at a 0/1 point; point is indexed by variable id.
  BigInt eval(const std::vector<std::uint8_t>& point) const;

  /// Replaces every occurrence of var by p (multilinearly).
  Polynomial substituted(std::uint32_t var, const Polynomial& p) const;

  bool contains_var(std::uint32_t var) const;

 private:
  std::map<Monomial, BigInt> terms_;
};

/// Union of two sorted variable sets (x^2 = x).
Monomial monomial_product(const Monomial& a, const Monomial& b);

enum class OpKind : std::uint8_t { Not, And, Xor2, Xor3, Maj };

/// Algebraic models of the basic Boolean operators:
///   NOT  -> 1 - a
///   AND  -> ab
///   XOR2 -> a + b - 2ab
///   XOR3 -> a + b + c - 2ab - 2ac - 2bc + 4abc
///   MAJ  -> ab + ac + bc - 2abc
Polynomial op_poly(OpKind kind, const std::vector<Polynomial>& inputs);

/// x1 + 2*x2. Over a shared support this turns the XOR3/MAJ pair of a full
/// adder into a + b + c, eliminating all nonlinear terms.
Polynomial fa_reduce(const Polynomial& x1, const Polynomial& x2);

}  // namespace aigsage
