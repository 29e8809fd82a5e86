// SPDX-License-Identifier: Apache-2.0
#include "aigsage/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace aigsage {

Polynomial Polynomial::constant(BigInt c) {
  Polynomial p;
  if (c != 0) p.terms_.emplace(Monomial{}, std::move(c));
  return p;
}

Polynomial Polynomial::variable(std::uint32_t v) {
  Polynomial p;
  p.terms_.emplace(Monomial{v}, 1);
  return p;
}

Polynomial Polynomial::from_literal(Literal l) {
  if (l.node == 0) return constant(l.inverted ? 1 : 0);
  if (!l.inverted) return variable(l.node);
  Polynomial p = constant(1);
  p.add_term(Monomial{l.node}, -1);
  return p;
}

BigInt Polynomial::coeff(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? BigInt(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const BigInt& c) {
  if (c == 0) return;
  const auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
  return m;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  Polynomial result;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) result.add_term(monomial_product(ma, mb), ca * cb);
  terms_ = std::move(result.terms_);
  return *this;
}

Polynomial& Polynomial::scale(const BigInt& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

BigInt Polynomial::eval(const std::vector<std::uint8_t>& point) const {
  BigInt total = 0;
  for (const auto& [m, c] : terms_) {
    bool on = true;
    for (std::uint32_t v : m) {
      if (v >= point.size()) throw std::out_of_range("Polynomial::eval: variable beyond point");
      if (!point[v]) {
        on = false;
        break;
      }
    }
    if (on) total += c;
  }
  return total;
}

Polynomial Polynomial::substituted(std::uint32_t var, const Polynomial& p) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    const auto it = std::lower_bound(m.begin(), m.end(), var);
    if (it == m.end() || *it != var) {
      out.add_term(m, c);
      continue;
    }
    Monomial rest(m.begin(), it);
    rest.insert(rest.end(), it + 1, m.end());
    for (const auto& [pm, pc] : p.terms()) out.add_term(monomial_product(rest, pm), c * pc);
  }
  return out;
}

bool Polynomial::contains_var(std::uint32_t var) const {
  for (const auto& [m, c] : terms_)
    if (std::binary_search(m.begin(), m.end(), var)) return true;
  return false;
}

Polynomial op_poly(OpKind kind, const std::vector<Polynomial>& inputs) {
  auto want = [&](std::size_t arity) {
    if (inputs.size() != arity) throw std::invalid_argument("op_poly: arity mismatch");
  };
  switch (kind) {
    case OpKind::Not: {
      want(1);
      return Polynomial::constant(1) - inputs[0];
    }
    case OpKind::And: {
      want(2);
      return inputs[0] * inputs[1];
    }
    case OpKind::Xor2: {
      want(2);
      Polynomial ab = inputs[0] * inputs[1];
      return inputs[0] + inputs[1] - ab.scale(2);
    }
    case OpKind::Xor3: {
      want(3);
      Polynomial p = inputs[0] + inputs[1] + inputs[2];
      Polynomial ab = inputs[0] * inputs[1];
      Polynomial ac = inputs[0] * inputs[2];
      Polynomial bc = inputs[1] * inputs[2];
      Polynomial abc = ab * inputs[2];
      p -= (ab + ac + bc).scale(2);
      p += abc.scale(4);
      return p;
    }
    case OpKind::Maj: {
      want(3);
      Polynomial ab = inputs[0] * inputs[1];
      Polynomial ac = inputs[0] * inputs[2];
      Polynomial bc = inputs[1] * inputs[2];
      Polynomial abc = ab * inputs[2];
      return ab + ac + bc - abc.scale(2);
    }
  }
  throw std::invalid_argument("op_poly: unknown kind");
}

Polynomial fa_reduce(const Polynomial& x1, const Polynomial& x2) {
  Polynomial doubled = x2;
  doubled.scale(2);
  return x1 + doubled;
}

}  // namespace aigsage
