#pragma once

// Exact scalar types: rationals, Gaussian rationals, and Laurent
// polynomials in pi over the Gaussian rationals.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pvz {

using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p", "p/q", or a finite decimal like "-0.25" exactly.
// Base is always 10; a zero denominator is rejected before GMP
// canonicalization (which would trap).
inline Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rat_parse: empty token");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rat r(s, 10);
    if (r.get_den() == 0) throw std::invalid_argument("rat_parse: zero denominator");
    r.canonicalize();
    return r;
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rat r(s, 10);
    r.canonicalize();
    return r;
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  std::size_t frac_len = s.size() - dot - 1;
  if (frac_len == 0) throw std::invalid_argument("rat_parse: trailing dot");
  Rat num(digits, 10);
  Rat den(1);
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  Rat r = num / den;
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline double rat_d(const Rat& r) { return r.get_d(); }

inline bool rat_is_int(const Rat& r) { return r.get_den() == 1; }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Rat rat_pow(const Rat& r, long e) {
  if (e == 0) return Rat(1);
  if (e < 0) {
    if (r == 0) throw std::domain_error("rat_pow: zero to negative power");
    return rat_pow(Rat(1) / r, -e);
  }
  Rat acc(1), base = r;
  long k = e;
  while (k > 0) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  acc.canonicalize();
  return acc;
}

// Gaussian rational a + b*i.
struct GaussRat {
  Rat re{0}, im{0};

  GaussRat() = default;
  GaussRat(Rat r) : re(std::move(r)) {}
  GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }

  GaussRat operator-() const { return {-re, -im}; }
  GaussRat conj() const { return {re, -im}; }

  GaussRat& operator+=(const GaussRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRat& operator-=(const GaussRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussRat& operator*=(const GaussRat& o) { return *this = *this * o; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

  GaussRat inv() const {
    Rat n = re * re + im * im;
    if (n == 0) throw std::domain_error("GaussRat::inv: zero");
    return {re / n, -im / n};
  }

  std::complex<double> to_complex() const { return {rat_d(re), rat_d(im)}; }

  std::string str() const {
    std::ostringstream os;
    os << rat_str(re);
    if (im != 0) os << (im > 0 ? "+" : "") << rat_str(im) << "i";
    return os.str();
  }
};

inline GaussRat gauss_i() { return {Rat(0), Rat(1)}; }

// Laurent polynomial in pi with GaussRat coefficients: sum_k c_k * pi^k.
// Closed under the operations the test-function calculus needs
// (derivatives bring pi up, fourier constants bring pi down).
struct PiLaurent {
  std::map<int, GaussRat> c;  // exponent -> coefficient, no zero entries

  PiLaurent() = default;
  PiLaurent(GaussRat v) {
    if (!v.is_zero()) c.emplace(0, std::move(v));
  }
  PiLaurent(Rat v) : PiLaurent(GaussRat(std::move(v))) {}

  static PiLaurent term(int pi_pow, GaussRat v) {
    PiLaurent p;
    if (!v.is_zero()) p.c.emplace(pi_pow, std::move(v));
    return p;
  }

  bool is_zero() const { return c.empty(); }

  PiLaurent& operator+=(const PiLaurent& o) {
    for (const auto& [k, v] : o.c) {
      auto it = c.find(k);
      if (it == c.end()) {
        c.emplace(k, v);
      } else {
        it->second += v;
        if (it->second.is_zero()) c.erase(it);
      }
    }
    return *this;
  }
  PiLaurent& operator-=(const PiLaurent& o) {
    for (const auto& [k, v] : o.c) {
      auto it = c.find(k);
      if (it == c.end()) {
        c.emplace(k, -v);
      } else {
        it->second -= v;
        if (it->second.is_zero()) c.erase(it);
      }
    }
    return *this;
  }
  friend PiLaurent operator+(PiLaurent a, const PiLaurent& b) { return a += b; }
  friend PiLaurent operator-(PiLaurent a, const PiLaurent& b) { return a -= b; }
  PiLaurent operator-() const {
    PiLaurent r;
    for (const auto& [k, v] : c) r.c.emplace(k, -v);
    return r;
  }
  friend PiLaurent operator*(const PiLaurent& a, const PiLaurent& b) {
    PiLaurent r;
    for (const auto& [ka, va] : a.c)
      for (const auto& [kb, vb] : b.c) {
        GaussRat prod = va * vb;
        if (prod.is_zero()) continue;
        auto it = r.c.find(ka + kb);
        if (it == r.c.end()) {
          r.c.emplace(ka + kb, std::move(prod));
        } else {
          it->second += prod;
          if (it->second.is_zero()) r.c.erase(it);
        }
      }
    return r;
  }
  PiLaurent& operator*=(const PiLaurent& o) { return *this = *this * o; }
  friend bool operator==(const PiLaurent& a, const PiLaurent& b) { return a.c == b.c; }
  friend bool operator!=(const PiLaurent& a, const PiLaurent& b) { return !(a == b); }

  // Inverse of a single-term Laurent scalar; throws otherwise.
  PiLaurent inv() const {
    if (c.size() != 1) throw std::domain_error("PiLaurent::inv: not a monomial scalar");
    const auto& [k, v] = *c.begin();
    return term(-k, v.inv());
  }

  std::complex<double> to_complex() const {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [k, v] : c) {
      double p = std::pow(std::numbers::pi, k);
      acc += v.to_complex() * p;
    }
    return acc;
  }

  std::string str() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c) {
      if (!first) os << " + ";
      first = false;
      os << "(" << v.str() << ")";
      if (k != 0) os << "*pi^" << k;
    }
    return os.str();
  }
};

}  // namespace pvz
