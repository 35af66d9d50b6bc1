#pragma once

// Calculus on formal expressions sum_k p_k(x; s) * f(x)^{s-k} with a
// fixed base f. Differentiation is exact; normalize() folds every
// f-divisible coefficient into the part one level up, giving a
// canonical representative.

#include <map>

#include "pvzeta/errors.hpp"
#include "pvzeta/poly.hpp"

namespace pvz {

struct SymbolicPower {
  QPoly base;                  // f, nonzero
  std::map<int, SPoly> parts;  // k >= 0 -> p_k, no zero entries

  static SymbolicPower power_s(const QPoly& f) {
    SymbolicPower e;
    e.base = f;
    e.parts.emplace(0, to_spoly(QPoly::constant(f.n, Rat(1))));
    return e;
  }
  // f^{s+1} represented as f * f^s.
  static SymbolicPower power_s_plus_1(const QPoly& f) {
    SymbolicPower e;
    e.base = f;
    e.parts.emplace(0, to_spoly(f));
    return e;
  }
  // g * f^s for polynomial g.
  static SymbolicPower with_prefactor(const QPoly& f, const QPoly& g) {
    SymbolicPower e;
    e.base = f;
    if (!g.is_zero()) e.parts.emplace(0, to_spoly(g));
    return e;
  }

  void add_part(int k, const SPoly& p) {
    if (p.is_zero()) return;
    auto it = parts.find(k);
    if (it == parts.end()) {
      parts.emplace(k, p);
    } else {
      it->second += p;
      if (it->second.is_zero()) parts.erase(it);
    }
  }

  // d/dx_j: (d p_k) f^{s-k} + p_k (s-k) (d f) f^{s-k-1}.
  SymbolicPower derivative(int j) const {
    SymbolicPower r;
    r.base = base;
    SPoly df = to_spoly(base.derivative(j));
    for (const auto& [k, p] : parts) {
      r.add_part(k, p.derivative(j));
      SPoly shift = p.scaled(PolyS::affine(Rat(-k), Rat(1)));  // (s-k) * p
      r.add_part(k + 1, shift * df);
    }
    return r;
  }

  SymbolicPower& operator+=(const SymbolicPower& o) {
    for (const auto& [k, p] : o.parts) add_part(k, p);
    return *this;
  }

  SymbolicPower scaled(const PolyS& c) const {
    SymbolicPower r;
    r.base = base;
    for (const auto& [k, p] : parts) r.add_part(k, p.scaled(c));
    return r;
  }

  SymbolicPower multiplied(const QPoly& g) const {
    SymbolicPower r;
    r.base = base;
    SPoly gs = to_spoly(g);
    for (const auto& [k, p] : parts) r.add_part(k, p * gs);
    return r;
  }

  // Folds f-divisible content of p_k into p_{k-1}, top down; remainders
  // are division remainders, so one descending pass is a fixpoint.
  void normalize() {
    if (parts.empty()) return;
    int kmax = parts.rbegin()->first;
    for (int k = kmax; k >= 1; --k) {
      auto it = parts.find(k);
      if (it == parts.end()) continue;
      auto [q, r] = divrem(it->second, base);
      if (r.is_zero())
        parts.erase(it);
      else
        it->second = r;
      add_part(k - 1, q);
    }
  }

  // Value at integer s = m as a plain polynomial; defined when every
  // surviving exponent m - k is nonnegative.
  QPoly expand_at(long m) const {
    QPoly acc(base.n);
    for (const auto& [k, p] : parts) {
      if (m - k < 0) throw std::domain_error("SymbolicPower::expand_at: negative power");
      QPoly pk(base.n);
      for (const auto& [e, cs] : p.t) pk.add_term(e, cs.eval(Rat(m)));
      acc += pk * base.pow(static_cast<int>(m - k));
    }
    return acc;
  }
};

// q(d/dx) applied to expr, with q a constant-coefficient symbol given
// as a polynomial in the dual variables.
inline SymbolicPower apply_operator(const QPoly& q, const SymbolicPower& expr) {
  SymbolicPower acc;
  acc.base = expr.base;
  for (const auto& [e, c] : q.t) {
    SymbolicPower term = expr;
    for (int j = 0; j < q.n; ++j)
      for (int rep = 0; rep < e[j]; ++rep) term = term.derivative(j);
    acc += term.scaled(PolyS(c));
  }
  return acc;
}

// q(d/dx) applied to an ordinary polynomial.
inline QPoly plain_apply(const QPoly& q, const QPoly& target) {
  QPoly acc(target.n);
  for (const auto& [e, c] : q.t) {
    QPoly term = target;
    for (int j = 0; j < q.n; ++j)
      for (int rep = 0; rep < e[j]; ++rep) term = term.derivative(j);
    acc += term.scaled_rat(c);
  }
  return acc;
}

}  // namespace pvz
