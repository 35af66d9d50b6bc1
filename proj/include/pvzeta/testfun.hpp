#pragma once

// Schwartz test data of the form p(x) * exp(-pi u^2 |x|^2) with p over
// Q(i)[pi, 1/pi] and rational width u > 0. The class is closed under
// derivatives, polynomial multiplication, rational dilation, and the
// Fourier transform for every rational additive character, with all
// operations exact at the coefficient level.

#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "pvzeta/errors.hpp"
#include "pvzeta/poly.hpp"
#include "pvzeta/rational.hpp"

namespace pvz {

enum class Side { Primal, Dual };

inline Side flip(Side s) { return s == Side::Primal ? Side::Dual : Side::Primal; }

// x -> exp(2 pi i a <x, y>), a rational and nonzero.
struct PsiCharacter {
  Rat a{1};
};

// Constant with F_psi(x_j xi) = c_psi d_j F_psi(xi): c = -i / (2 pi a).
inline PiLaurent c_psi(const PsiCharacter& psi) {
  if (psi.a == 0) throw UsageError("psi character must have nonzero parameter");
  return PiLaurent::term(-1, GaussRat{Rat(0), rat(-1, 2) / psi.a});
}

// Inversion constant: F_{-psi} F_psi = A(psi) id with A = |a|^{-dim}.
inline Rat a_psi(const PsiCharacter& psi, int dim) {
  if (psi.a == 0) throw UsageError("psi character must have nonzero parameter");
  return rat_pow(Rat(1) / rat_abs(psi.a), dim);
}

struct CompiledTestFunction {
  int n = 0;
  double w2 = 1.0;  // width^2: gaussian factor exp(-pi w2 |x|^2)
  std::vector<std::pair<Expo, std::complex<double>>> terms;

  std::complex<double> eval(const std::vector<double>& x) const {
    double r2 = 0;
    for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
    double g = std::exp(-std::numbers::pi * w2 * r2);
    // Neumaier-compensated accumulation keeps cancellation-heavy
    // polynomials at full double accuracy.
    double sr = 0, cr = 0, si = 0, ci = 0;
    for (const auto& [e, c] : terms) {
      double mono = 1;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < e[i]; ++k) mono *= x[i];
      double vr = c.real() * mono, vi = c.imag() * mono;
      double t = sr + vr;
      cr += (std::abs(sr) >= std::abs(vr)) ? (sr - t) + vr : (vr - t) + sr;
      sr = t;
      t = si + vi;
      ci += (std::abs(si) >= std::abs(vi)) ? (si - t) + vi : (vi - t) + si;
      si = t;
    }
    return std::complex<double>(sr + cr, si + ci) * g;
  }
};

struct TestFunction {
  int n = 0;
  CPoly poly;
  Rat width{1};  // u > 0
  Side side = Side::Primal;

  static TestFunction gaussian(int n, Side side = Side::Primal) {
    TestFunction f;
    f.n = n;
    f.poly = to_cpoly(QPoly::constant(n, Rat(1)));
    f.width = 1;
    f.side = side;
    return f;
  }

  bool is_zero() const { return poly.is_zero(); }
  int degree() const { return poly.degree(); }

  TestFunction with_poly(CPoly p) const {
    TestFunction f = *this;
    f.poly = std::move(p);
    return f;
  }

  TestFunction operator+(const TestFunction& o) const {
    if (n != o.n || width != o.width || side != o.side)
      throw UsageError("test function sum requires matching width and side");
    return with_poly(poly + o.poly);
  }
  TestFunction operator-(const TestFunction& o) const {
    if (n != o.n || width != o.width || side != o.side)
      throw UsageError("test function difference requires matching width and side");
    return with_poly(poly - o.poly);
  }
  TestFunction scaled(const PiLaurent& c) const { return with_poly(poly.scaled(c)); }
  TestFunction multiplied(const QPoly& g) const { return with_poly(poly * to_cpoly(g)); }

  // d/dx_j of p * exp(-pi u^2 |x|^2).
  TestFunction derivative(int j) const {
    PiLaurent two_pi_u2 = PiLaurent::term(1, GaussRat{width * width * 2, Rat(0)});
    CPoly xj = CPoly::var(n, j, PiLaurent(Rat(1)));
    return with_poly(poly.derivative(j) - (xj * poly).scaled(two_pi_u2));
  }

  // q(d/dx) xi for a constant-coefficient symbol q.
  TestFunction apply_op(const QPoly& q) const {
    TestFunction acc = with_poly(CPoly(n));
    for (const auto& [e, c] : q.t) {
      TestFunction term = *this;
      for (int j = 0; j < n; ++j)
        for (int rep = 0; rep < e[j]; ++rep) term = term.derivative(j);
      acc.poly += term.poly.scaled(PiLaurent(c));
    }
    return acc;
  }

  // xi(a x), rational a != 0.
  TestFunction dilated(const Rat& a) const {
    if (a == 0) throw UsageError("dilation parameter must be nonzero");
    TestFunction f = *this;
    CPoly p(n);
    for (const auto& [e, c] : poly.t)
      p.add_term(e, coef_mul_rat(c, rat_pow(a, expo_total(e))));
    f.poly = std::move(p);
    f.width = width * rat_abs(a);
    return f;
  }

  CompiledTestFunction compile() const {
    CompiledTestFunction c;
    c.n = n;
    c.w2 = rat_d(width * width);
    for (const auto& [e, v] : poly.t) c.terms.emplace_back(e, v.to_complex());
    return c;
  }

  std::complex<double> eval(const std::vector<double>& x) const { return compile().eval(x); }
};

// Exact Fourier transform with kernel psi(<x, y>). Built from the
// gaussian seed F_{psi_1}(e^{-pi u^2 |x|^2}) = u^{-n} e^{-pi |y|^2/u^2}
// and the commutation rule F(x_j xi) = c(psi_1) d_j F(xi), then the
// substitution y -> a y for general psi_a.
inline TestFunction fourier(const TestFunction& xi, const PsiCharacter& psi) {
  const int n = xi.n;
  PiLaurent c1 = c_psi(PsiCharacter{Rat(1)});
  Rat v = Rat(1) / xi.width;  // transformed width under psi_1

  TestFunction seed;
  seed.n = n;
  seed.width = v;
  seed.side = flip(xi.side);
  seed.poly = to_cpoly(QPoly::constant(n, rat_pow(xi.width, -n)));

  // T(alpha) = F_{psi_1}(x^alpha exp(-pi u^2 |x|^2)) by monomial recursion.
  std::map<Expo, CPoly, GradedLex> memo;
  memo.emplace(Expo(n, 0), seed.poly);
  auto transform_of = [&](const Expo& e, auto&& self) -> const CPoly& {
    auto it = memo.find(e);
    if (it != memo.end()) return it->second;
    // Reduce along the first positive slot.
    int j = 0;
    while (e[j] == 0) ++j;
    Expo prev = e;
    prev[j] -= 1;
    const CPoly& tp = self(prev, self);
    TestFunction tmp = seed.with_poly(tp);
    CPoly res = tmp.derivative(j).poly.scaled(c1);
    return memo.emplace(e, std::move(res)).first->second;
  };

  CPoly acc(n);
  for (const auto& [e, c] : xi.poly.t) acc += transform_of(e, transform_of).scaled(c);

  TestFunction out = seed.with_poly(acc);
  if (psi.a != 1) {
    // Substitute y -> a y: monomials pick up a^{|e|}, width scales by |a|.
    CPoly p(n);
    for (const auto& [e, c] : out.poly.t)
      p.add_term(e, coef_mul_rat(c, rat_pow(psi.a, expo_total(e))));
    out.poly = std::move(p);
    out.width = out.width * rat_abs(psi.a);
  }
  return out;
}

// Scale factor turning fourier into its unitary (self-dual) variant:
// A(psi)^{-1/2} = |a|^{n/2}, applied numerically by callers.
inline double fourier_selfdual_scale(const PsiCharacter& psi, int dim) {
  return std::pow(std::abs(rat_d(psi.a)), dim / 2.0);
}

// Hermite-type eigenbasis: ladder H_{m+1} = 2 x H_m - (1/(2 pi)) H_m',
// so F_{psi_1}(H_m(x) G) = i^m H_m(y) G coefficientwise. Products over
// coordinates are ordered by total degree, then lexicographically.
inline std::vector<CPoly> hermite_ladder_1d(int max_deg) {
  std::vector<CPoly> h;
  h.push_back(to_cpoly(QPoly::constant(1, Rat(1))));
  if (max_deg == 0) return h;
  CPoly two_x = CPoly::var(1, 0, PiLaurent(Rat(2)));
  h.push_back(two_x);
  PiLaurent inv_two_pi = PiLaurent::term(-1, GaussRat{rat(1, 2), Rat(0)});
  for (int m = 1; m < max_deg; ++m)
    h.push_back(two_x * h[m] - h[m].derivative(0).scaled(inv_two_pi));
  return h;
}

inline std::vector<TestFunction> hermite_basis(int n, int max_deg,
                                               Side side = Side::Primal) {
  auto ladder = hermite_ladder_1d(max_deg);
  // Enumerate alpha with |alpha| <= max_deg in graded lexicographic order.
  std::vector<Expo> alphas;
  Expo a(n, 0);
  std::function<void(int, int, int)> rec = [&](int pos, int remaining, int total) {
    if (pos == n) {
      if (total >= 0) alphas.push_back(a);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      a[pos] = k;
      rec(pos + 1, remaining - k, total + k);
    }
    a[pos] = 0;
  };
  rec(0, max_deg, 0);
  std::sort(alphas.begin(), alphas.end(), GradedLex{});

  std::vector<TestFunction> out;
  for (const auto& alpha : alphas) {
    CPoly p = to_cpoly(QPoly::constant(n, Rat(1)));
    for (int j = 0; j < n; ++j) {
      const CPoly& hj = ladder[alpha[j]];
      // Substitute variable 0 of the 1d ladder polynomial by x_j.
      CPoly lifted(n);
      for (const auto& [e, c] : hj.t) {
        Expo en(n, 0);
        en[j] = e[0];
        lifted.add_term(en, c);
      }
      p = p * lifted;
    }
    TestFunction f;
    f.n = n;
    f.width = 1;
    f.side = side;
    f.poly = std::move(p);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace pvz
