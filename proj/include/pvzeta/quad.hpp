#pragma once

// Deterministic quadrature primitives: fixed Gauss-Legendre rules with
// Newton-refined nodes, compensated accumulation, and an adaptive
// bisection integrator for smooth complex integrands on an interval.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace pvz {

struct GLRule {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

namespace detail {

inline GLRule build_gl(int k) {
  GLRule r;
  r.x.resize(k);
  r.w.resize(k);
  for (int i = 0; i < k / 2 + k % 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double p1 = 0, p2 = 0;
    for (int it = 0; it < 100; ++it) {
      p1 = 1.0;
      p2 = 0.0;
      for (int j = 0; j < k; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1.0);
      }
      double dp = k * (x * p1 - p2) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    p1 = 1.0;
    p2 = 0.0;
    for (int j = 0; j < k; ++j) {
      double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1.0);
    }
    double dp = k * (x * p1 - p2) / (x * x - 1.0);
    r.x[i] = -x;
    r.x[k - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.w[i] = w;
    r.w[k - 1 - i] = w;
  }
  if (k % 2 == 1) r.x[k / 2] = 0.0;
  return r;
}

}  // namespace detail

inline const GLRule& gauss_legendre(int k) {
  static const std::map<int, GLRule> cache = [] {
    std::map<int, GLRule> m;
    for (int k2 : {8, 12, 16, 24, 32, 48, 64}) m.emplace(k2, detail::build_gl(k2));
    return m;
  }();
  auto it = cache.find(k);
  if (it == cache.end()) throw std::domain_error("gauss_legendre: unsupported order");
  return it->second;
}

// Compensated complex accumulator (Neumaier variant).
struct KahanC {
  double sr = 0, cr = 0, si = 0, ci = 0;
  void add(std::complex<double> v) {
    double t = sr + v.real();
    cr += (std::abs(sr) >= std::abs(v.real())) ? (sr - t) + v.real() : (v.real() - t) + sr;
    sr = t;
    t = si + v.imag();
    ci += (std::abs(si) >= std::abs(v.imag())) ? (si - t) + v.imag() : (v.imag() - t) + si;
    si = t;
  }
  std::complex<double> get() const { return {sr + cr, si + ci}; }
};

struct Quad1DResult {
  std::complex<double> value{0.0, 0.0};
  double err = 0;
  long evals = 0;
};

template <class F>
std::complex<double> gl_apply(F&& f, double a, double b, const GLRule& rule, long& evals) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  KahanC acc;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    acc.add(f(mid + half * rule.x[i]) * (half * rule.w[i]));
    ++evals;
  }
  return acc.get();
}

// Adaptive bisection with a G16/G24 error signal. Deterministic: the
// worklist is processed depth-first, left interval first, and the
// acceptance test depends only on the integrand values.
template <class F>
Quad1DResult adaptive_gl(F&& f, double a, double b, double rel_tol, double abs_floor,
                         int max_depth = 30, long max_evals = 4000000) {
  const GLRule& lo = gauss_legendre(16);
  const GLRule& hi = gauss_legendre(24);
  Quad1DResult out;
  if (!(b > a)) return out;
  struct Seg {
    double a, b;
    int depth;
  };
  std::vector<Seg> stack{{a, b, 0}};
  KahanC val;
  double err = 0;
  double scale = abs_floor;
  double total_len = b - a;
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    std::complex<double> v_hi = gl_apply(f, s.a, s.b, hi, out.evals);
    std::complex<double> v_lo = gl_apply(f, s.a, s.b, lo, out.evals);
    double e = std::abs(v_hi - v_lo);
    scale = std::max(scale, std::abs(v_hi));
    double budget = std::max(rel_tol * scale, abs_floor) * ((s.b - s.a) / total_len);
    if (e <= budget || s.depth >= max_depth || out.evals > max_evals) {
      val.add(v_hi);
      err += e;
    } else {
      double m = 0.5 * (s.a + s.b);
      stack.push_back({m, s.b, s.depth + 1});
      stack.push_back({s.a, m, s.depth + 1});
    }
  }
  out.value = val.get();
  out.err = err;
  return out;
}

}  // namespace pvz
