#pragma once

// Dense univariate polynomials in one formal variable s over Q.
// Used for Bernstein-Sato data and symbolic exponents.

#include <algorithm>
#include <complex>
#include <cstdlib>
#include <string>
#include <vector>

#include "pvzeta/errors.hpp"
#include "pvzeta/rational.hpp"

namespace pvz {

struct PolyS {
  std::vector<Rat> a;  // ascending powers, no trailing zeros

  PolyS() = default;
  PolyS(Rat c) {
    if (c != 0) a.push_back(std::move(c));
  }
  PolyS(long c) : PolyS(Rat(c)) {}

  static PolyS var() {
    PolyS p;
    p.a = {Rat(0), Rat(1)};
    return p;
  }
  // c0 + c1*s
  static PolyS affine(Rat c0, Rat c1) {
    PolyS p;
    p.a = {std::move(c0), std::move(c1)};
    p.trim();
    return p;
  }

  void trim() {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  bool is_zero() const { return a.empty(); }
  int degree() const { return static_cast<int>(a.size()) - 1; }
  Rat lead() const { return a.empty() ? Rat(0) : a.back(); }
  Rat coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(a.size())) ? a[k] : Rat(0);
  }

  PolyS operator-() const {
    PolyS r = *this;
    for (auto& c : r.a) c = -c;
    return r;
  }
  PolyS& operator+=(const PolyS& o) {
    if (o.a.size() > a.size()) a.resize(o.a.size(), Rat(0));
    for (std::size_t i = 0; i < o.a.size(); ++i) a[i] += o.a[i];
    trim();
    return *this;
  }
  PolyS& operator-=(const PolyS& o) {
    if (o.a.size() > a.size()) a.resize(o.a.size(), Rat(0));
    for (std::size_t i = 0; i < o.a.size(); ++i) a[i] -= o.a[i];
    trim();
    return *this;
  }
  friend PolyS operator+(PolyS x, const PolyS& y) { return x += y; }
  friend PolyS operator-(PolyS x, const PolyS& y) { return x -= y; }
  friend PolyS operator*(const PolyS& x, const PolyS& y) {
    if (x.is_zero() || y.is_zero()) return {};
    PolyS r;
    r.a.assign(x.a.size() + y.a.size() - 1, Rat(0));
    for (std::size_t i = 0; i < x.a.size(); ++i)
      for (std::size_t j = 0; j < y.a.size(); ++j) r.a[i + j] += x.a[i] * y.a[j];
    r.trim();
    return r;
  }
  PolyS& operator*=(const PolyS& o) { return *this = *this * o; }
  friend PolyS operator*(PolyS x, const Rat& c) {
    for (auto& v : x.a) v *= c;
    x.trim();
    return x;
  }
  friend PolyS operator*(const Rat& c, PolyS x) { return std::move(x) * c; }
  PolyS div_rat(const Rat& c) const {
    if (c == 0) throw std::domain_error("PolyS::div_rat: zero divisor");
    PolyS r = *this;
    for (auto& v : r.a) v /= c;
    return r;
  }
  friend bool operator==(const PolyS& x, const PolyS& y) { return x.a == y.a; }
  friend bool operator!=(const PolyS& x, const PolyS& y) { return !(x == y); }

  Rat eval(const Rat& s) const {
    Rat acc(0);
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * s + *it;
    return acc;
  }
  std::complex<double> eval(std::complex<double> s) const {
    std::complex<double> acc{0.0, 0.0};
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * s + rat_d(*it);
    return acc;
  }

  // p(s + c), exact.
  PolyS compose_shift(const Rat& c) const {
    PolyS shift = affine(c, Rat(1));
    PolyS acc;
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
      acc = acc * shift;
      acc += PolyS(*it);
    }
    return acc;
  }

  std::string str(const std::string& v = "s") const {
    if (a.empty()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      if (a[k] == 0) continue;
      if (!out.empty()) out += (a[k] > 0) ? " + " : " - ";
      Rat mag = out.empty() ? a[k] : rat_abs(a[k]);
      bool unit = (mag == 1 || mag == -1) && k > 0;
      if (!unit)
        out += rat_str(mag);
      else if (mag == -1)
        out += "-";
      if (k > 0) {
        if (!unit) out += "*";
        out += v;
        if (k > 1) out += "^" + std::to_string(k);
      }
    }
    return out;
  }
};

namespace detail {
// All positive divisors of |n|. Trial division; inputs are small
// (leading/constant coefficients of low-degree certified data).
inline std::vector<mpz_class> divisors(mpz_class n) {
  if (n < 0) n = -n;
  std::vector<mpz_class> out;
  if (n == 0) return out;
  for (mpz_class d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      mpz_class q = n / d;
      if (q != d) out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace detail

// Factors p = lead * prod_j (s - root_j) over Q; roots returned ascending
// with multiplicity. Throws IrrationalRootsError when p does not split.
inline std::vector<Rat> rational_roots(const PolyS& p) {
  if (p.is_zero()) throw IrrationalRootsError("rational_roots: zero polynomial");
  PolyS w = p;
  std::vector<Rat> roots;
  // Strip roots at 0.
  while (w.degree() >= 1 && w.a[0] == 0) {
    roots.push_back(Rat(0));
    w.a.erase(w.a.begin());
  }
  while (w.degree() >= 1) {
    // Clear denominators to an integer polynomial.
    mpz_class lcm(1);
    for (const auto& c : w.a) {
      mpz_class den = c.get_den();
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
      lcm = lcm / g * den;
    }
    std::vector<mpz_class> ia;
    ia.reserve(w.a.size());
    for (const auto& c : w.a) {
      Rat scaled = c * Rat(lcm);
      ia.push_back(scaled.get_num());
    }
    bool found = false;
    auto ps = detail::divisors(ia.front());
    auto qs = detail::divisors(ia.back());
    for (const auto& num : ps) {
      for (const auto& den : qs) {
        for (int sign = 1; sign >= -1 && !found; sign -= 2) {
          Rat cand(sign * num, den);
          cand.canonicalize();
          if (w.eval(cand) == 0) {
            roots.push_back(cand);
            // Deflate by (s - cand), exact synthetic division.
            std::vector<Rat> q(w.a.size() - 1, Rat(0));
            Rat carry(0);
            for (int k = w.degree(); k >= 1; --k) {
              carry = w.a[k] + carry * cand;
              q[k - 1] = carry;
            }
            w.a = std::move(q);
            w.trim();
            found = true;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found)
      throw IrrationalRootsError("rational_roots: no rational factorization of " + p.str());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace pvz
