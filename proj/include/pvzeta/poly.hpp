#pragma once

// Sparse multivariate polynomials over an exact coefficient ring.
// Term order is graded lexicographic; all maps iterate in that order,
// which keeps serialization and division deterministic.

#include <complex>
#include <concepts>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pvzeta/errors.hpp"
#include "pvzeta/rational.hpp"
#include "pvzeta/s_poly.hpp"

namespace pvz {

using Expo = std::vector<int>;

inline int expo_total(const Expo& e) { return std::accumulate(e.begin(), e.end(), 0); }

struct GradedLex {
  bool operator()(const Expo& a, const Expo& b) const {
    int ta = expo_total(a), tb = expo_total(b);
    if (ta != tb) return ta < tb;
    return a < b;  // lexicographic tiebreak
  }
};

inline bool coef_is_zero(const Rat& c) { return c == 0; }
inline bool coef_is_zero(const GaussRat& c) { return c.is_zero(); }
inline bool coef_is_zero(const PiLaurent& c) { return c.is_zero(); }
inline bool coef_is_zero(const PolyS& c) { return c.is_zero(); }

inline Rat coef_mul_rat(const Rat& c, const Rat& r) { return c * r; }
inline GaussRat coef_mul_rat(const GaussRat& c, const Rat& r) {
  return {c.re * r, c.im * r};
}
inline PiLaurent coef_mul_rat(const PiLaurent& c, const Rat& r) {
  return c * PiLaurent(r);
}
inline PolyS coef_mul_rat(const PolyS& c, const Rat& r) { return c * r; }

inline Rat coef_div_rat(const Rat& c, const Rat& r) { return c / r; }
inline PolyS coef_div_rat(const PolyS& c, const Rat& r) { return c.div_rat(r); }

template <class C>
struct Poly {
  int n = 0;                       // number of variables
  std::map<Expo, C, GradedLex> t;  // no zero coefficients stored

  Poly() = default;
  explicit Poly(int nvars) : n(nvars) {}

  static Poly zero(int nvars) { return Poly(nvars); }
  static Poly constant(int nvars, C c) {
    Poly p(nvars);
    if (!coef_is_zero(c)) p.t.emplace(Expo(nvars, 0), std::move(c));
    return p;
  }
  static Poly var(int nvars, int j, C c = C(Rat(1))) {
    Poly p(nvars);
    Expo e(nvars, 0);
    e[j] = 1;
    if (!coef_is_zero(c)) p.t.emplace(std::move(e), std::move(c));
    return p;
  }
  static Poly monomial(int nvars, Expo e, C c) {
    Poly p(nvars);
    if (!coef_is_zero(c)) p.t.emplace(std::move(e), std::move(c));
    return p;
  }

  bool is_zero() const { return t.empty(); }
  int degree() const {
    int d = -1;
    for (const auto& [e, c] : t) d = std::max(d, expo_total(e));
    return d;
  }
  bool is_homogeneous() const {
    if (t.empty()) return true;
    int d = expo_total(t.begin()->first);
    for (const auto& [e, c] : t)
      if (expo_total(e) != d) return false;
    return true;
  }
  bool is_constant() const {
    return t.empty() || (t.size() == 1 && expo_total(t.begin()->first) == 0);
  }
  C constant_term() const {
    Expo z(n, 0);
    auto it = t.find(z);
    return it == t.end() ? C() : it->second;
  }

  void add_term(const Expo& e, const C& c) {
    if (coef_is_zero(c)) return;
    auto it = t.find(e);
    if (it == t.end()) {
      t.emplace(e, c);
    } else {
      it->second += c;
      if (coef_is_zero(it->second)) t.erase(it);
    }
  }

  Poly operator-() const {
    Poly r(n);
    for (const auto& [e, c] : t) r.t.emplace(e, -c);
    return r;
  }
  Poly& operator+=(const Poly& o) {
    for (const auto& [e, c] : o.t) add_term(e, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [e, c] : o.t) add_term(e, -c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r(a.n);
    for (const auto& [ea, ca] : a.t)
      for (const auto& [eb, cb] : b.t) {
        Expo e(a.n);
        for (int i = 0; i < a.n; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.n == b.n && a.t == b.t; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly scaled(const C& c) const {
    Poly r(n);
    if (coef_is_zero(c)) return r;
    for (const auto& [e, v] : t) r.add_term(e, v * c);
    return r;
  }
  Poly scaled_rat(const Rat& r) const {
    Poly out(n);
    if (r == 0) return out;
    for (const auto& [e, v] : t) out.add_term(e, coef_mul_rat(v, r));
    return out;
  }

  Poly pow(int k) const {
    Poly acc = constant(n, C(Rat(1)));
    for (int i = 0; i < k; ++i) acc *= *this;
    return acc;
  }

  Poly derivative(int j) const {
    Poly r(n);
    for (const auto& [e, c] : t) {
      if (e[j] == 0) continue;
      Expo d = e;
      d[j] -= 1;
      r.add_term(d, coef_mul_rat(c, Rat(e[j])));
    }
    return r;
  }

  // p(a*x): coefficient of x^e picks up a^{|e|}.
  Poly dilated(const Rat& a) const {
    Poly r(n);
    for (const auto& [e, c] : t) r.add_term(e, coef_mul_rat(c, rat_pow(a, expo_total(e))));
    return r;
  }

  Rat eval_rat(const std::vector<Rat>& x) const
    requires std::same_as<C, Rat>
  {
    Rat acc(0);
    for (const auto& [e, c] : t) {
      Rat term = c;
      for (int i = 0; i < n; ++i) term *= rat_pow(x[i], e[i]);
      acc += term;
    }
    return acc;
  }

  double eval_d(const std::vector<double>& x) const
    requires std::same_as<C, Rat>
  {
    double acc = 0;
    for (const auto& [e, c] : t) {
      double term = rat_d(c);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < e[i]; ++k) term *= x[i];
      acc += term;
    }
    return acc;
  }
};

using QPoly = Poly<Rat>;        // polynomials over Q
using SPoly = Poly<PolyS>;      // coefficients are polynomials in s
using CPoly = Poly<PiLaurent>;  // coefficients in Q(i)[pi, 1/pi]

inline SPoly to_spoly(const QPoly& p) {
  SPoly r(p.n);
  for (const auto& [e, c] : p.t) r.t.emplace(e, PolyS(c));
  return r;
}

inline CPoly to_cpoly(const QPoly& p) {
  CPoly r(p.n);
  for (const auto& [e, c] : p.t) r.t.emplace(e, PiLaurent(Rat(c)));
  return r;
}

// Division with remainder by a single divisor with Rat coefficients.
// Terms whose leading monomial is not divisible move to the remainder.
template <class C>
std::pair<Poly<C>, Poly<C>> divrem(const Poly<C>& p, const QPoly& f) {
  if (f.is_zero()) throw std::domain_error("divrem: zero divisor");
  auto lead_f = *f.t.rbegin();  // largest in graded lex
  Poly<C> q(p.n), r(p.n), w = p;
  while (!w.is_zero()) {
    auto [e, c] = *w.t.rbegin();
    bool divisible = true;
    Expo d(p.n);
    for (int i = 0; i < p.n; ++i) {
      d[i] = e[i] - lead_f.first[i];
      if (d[i] < 0) {
        divisible = false;
        break;
      }
    }
    if (divisible) {
      C qc = coef_div_rat(c, lead_f.second);
      q.add_term(d, qc);
      // w -= qc * x^d * f
      for (const auto& [ef, cf] : f.t) {
        Expo e2(p.n);
        for (int i = 0; i < p.n; ++i) e2[i] = d[i] + ef[i];
        w.add_term(e2, -coef_mul_rat(qc, cf));
      }
    } else {
      r.add_term(e, c);
      w.t.erase(e);
    }
  }
  return {q, r};
}

template <class C>
std::optional<Poly<C>> divide_exact(const Poly<C>& p, const QPoly& f) {
  auto [q, r] = divrem(p, f);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

inline std::string expo_str(const Expo& e, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

inline std::string qpoly_str(const QPoly& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto it = p.t.rbegin(); it != p.t.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!out.empty()) out += (c > 0) ? " + " : " - ";
    Rat mag = out.empty() ? c : rat_abs(c);
    std::string mono = expo_str(e, names);
    if (mag == 1 && mono != "1") {
      if (out.empty() && c < 0) out += "-";
      out += mono;
    } else if (mag == -1 && mono != "1" && out.empty()) {
      out += "-" + mono;
    } else {
      out += rat_str(mag);
      if (mono != "1") out += "*" + mono;
    }
  }
  return out;
}

}  // namespace pvz
