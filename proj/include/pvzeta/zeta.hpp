#pragma once

// Orbitwise zeta integrals of a rank-1 descriptor.
//
// For orbit O_i the integral is written in the fiber variable t = |f(x)|:
//
//   Z_i(lambda; xi) = int_0^inf t^{s-1} h_i(t) dt,   s = orientation*(lambda + lambda0),
//
// where h_i collects the level-set integral of xi against the chart
// measure. Compact angular directions reduce to exact moments, so h_i
// is either a closed expression in t or a single hyperbolic-angle
// integral evaluated adaptively. The t-integral runs over dyadic cells
// with a two-rule Gauss-Legendre error signal; the lower end is closed
// by fitting the chart's small-t model and integrating it in closed
// form.
//
// Outside the convergence range Re s > 0 the value is defined by the
// descent recursion
//
//   Z_i(lambda) = eps_i^{-M} (-1)^{M deg fdual} [prod_{j<M} b(sigma + j)]^{-1}
//                 * Z_i(lambda + orientation*M; fdual(d)^M xi),
//
// with sigma = s - sigma_mu and eps_i the rescale eigenvalue of the
// orbit sign. M is chosen so the shifted integral has Re s >= 1/2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "pvzeta/errors.hpp"
#include "pvzeta/gamma_complex.hpp"
#include "pvzeta/quad.hpp"
#include "pvzeta/space.hpp"
#include "pvzeta/testfun.hpp"
#include "pvzeta/weyl.hpp"

namespace pvz {

using cplx = std::complex<double>;

struct QuadConfig {
  double rel_tol = 1e-9;
  int max_subdivisions = 4000;  // t-cell split budget per orbit integral
  double radial_cutoff = 16384.0;
  double theta_cap = 60.0;  // widening limit for the hyperbolic angle
  double pole_eps = 1e-6;
  int threads = 0;  // 0: decide from PVZETA_THREADS; grids only
};

struct EtaVector {
  std::vector<cplx> c;
};

inline EtaVector eta_ones(int k) { return EtaVector{std::vector<cplx>(k, cplx{1.0, 0.0})}; }
inline EtaVector eta_unit(int k, int i) {
  EtaVector e{std::vector<cplx>(k, cplx{0.0, 0.0})};
  e.c.at(i) = 1.0;
  return e;
}

struct ZetaValue {
  cplx value{0.0, 0.0};
  double abs_error_estimate = 0;
  cplx lambda{0.0, 0.0};
  std::vector<cplx> orbit_breakdown;  // unweighted Z_i; value = sum eta_i Z_i
  int M_used = 0;
  std::vector<std::string> flags;
};

// ---------------------------------------------------------------------------
// Exponent bookkeeping.

inline cplx mellin_exponent(const SpaceDesc& d, cplx lambda) {
  return static_cast<double>(d.orientation) * (lambda + rat_d(d.lambda0.at(0)));
}

inline Rat sigma_mu(const SpaceDesc& d) { return d.measure_exp.at(0); }

inline cplx b_argument(const SpaceDesc& d, cplx lambda) {
  return mellin_exponent(d, lambda) - rat_d(sigma_mu(d));
}

// One reciprocal-Gamma factor of the pole normalizer:
// alpha_j(lambda) = orientation*lambda + intercept, pole candidates at
// alpha_j in {0, -1, -2, ...}.
struct GammaFactor {
  int slope = 1;
  Rat intercept{0};
  cplx eval(cplx lambda) const { return static_cast<double>(slope) * lambda + rat_d(intercept); }
};

inline std::vector<GammaFactor> gamma_factors(const SpaceDesc& d) {
  d.require_rank1();
  std::vector<GammaFactor> out;
  for (const Rat& rho : rational_roots(d.bfun.at(0)))
    out.push_back({d.orientation, -d.lambda0_own() - rho});
  return out;
}

namespace detail {

inline double dist_to_nonpos_int(cplx a, long* which = nullptr) {
  long m = std::lround(a.real());
  if (m > 0) m = 0;
  if (which) *which = m;
  return std::abs(a - static_cast<double>(m));
}

}  // namespace detail

inline double pole_distance(const SpaceDesc& d, cplx lambda) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : gamma_factors(d)) best = std::min(best, detail::dist_to_nonpos_int(g.eval(lambda)));
  return best;
}

inline std::string pole_flag_text(const SpaceDesc& d, cplx lambda) {
  auto gs = gamma_factors(d);
  double best = std::numeric_limits<double>::infinity();
  std::size_t bj = 0;
  long bm = 0;
  for (std::size_t j = 0; j < gs.size(); ++j) {
    long m;
    double dd = detail::dist_to_nonpos_int(gs[j].eval(lambda), &m);
    if (dd < best) {
      best = dd;
      bj = j;
      bm = m;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "NearPole(factor=%zu,alpha=%.6g%+.6gi,m=%ld)", bj,
                gs[bj].eval(lambda).real(), gs[bj].eval(lambda).imag(), bm);
  return buf;
}

// ---------------------------------------------------------------------------
// Exact angular moments (values are Rat * pi).

namespace detail {

// (2m)! / (4^m m!) = Gamma(m + 1/2) / Gamma(1/2).
inline Rat gamma_half_ratio(int m) {
  mpz_class num, den, mf;
  mpz_fac_ui(num.get_mpz_t(), 2 * m);
  mpz_fac_ui(mf.get_mpz_t(), m);
  mpz_ui_pow_ui(den.get_mpz_t(), 4, m);
  den *= mf;
  return Rat(num) / Rat(den);
}

// int_0^{2pi} cos^{2p} sin^{2q} dphi = R * pi.
inline Rat circle_moment(int p, int q) {
  mpz_class pq;
  mpz_fac_ui(pq.get_mpz_t(), p + q);
  return Rat(2) * gamma_half_ratio(p) * gamma_half_ratio(q) / Rat(pq);
}

// int_{S^2} w1^{2k1} w2^{2k2} w3^{2k3} dS = R * pi.
inline Rat sphere3_moment(int k1, int k2, int k3) {
  return Rat(2) * gamma_half_ratio(k1) * gamma_half_ratio(k2) * gamma_half_ratio(k3) /
         gamma_half_ratio(k1 + k2 + k3 + 1);
}

// Exact in double for every n that reaches it (intermediate values are
// themselves binomial coefficients).
inline double choose(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fiber profiles: h_i as a function of t, so that the orbit integral is
// int_0^inf t^{s-1} h_i(t) dt. The measure normalization absorbs every
// radial Jacobian half-power, so h_i is smooth at t = 0 on direct and
// shell charts and t^{1/2}-singular at worst on hyperbolic ones.

enum class FreezeModel { LogFlat, InvSqrt };

struct FiberProfile {
  enum class Kind { Direct, Shell, Hyper };
  Kind kind = Kind::Direct;
  FreezeModel freeze = FreezeModel::LogFlat;
  bool zero = false;

  // Direct
  CompiledTestFunction fn;
  double sign = 1;

  // Shell / Hyper
  double w2 = 1;

  // Shell: exp(-pi w2 t) * sum_k shell[k] t^k.
  std::vector<cplx> shell;

  // Hyper: sum coef * t^tp * cosh^pa(th) sinh^pb(th) u^up with
  // u = cosh 2th, integrated against exp(-pi w2 t u) over th in
  // (0, Theta). Storing even cosh/sinh powers through u keeps the
  // coefficient combination exact; evaluating cosh^a sinh^b directly
  // loses all precision at large th whenever the powers nearly cancel.
  struct HTerm {
    int pa = 0, pb = 0, up = 0, tp = 0;
    cplx coef{0.0, 0.0};
  };
  std::vector<HTerm> hyp;
  int max_up = 0, max_tp = 0;
  double theta_rtol = 1e-12;
  double theta_cap = 60.0;

  cplx eval(double t) const {
    switch (kind) {
      case Kind::Direct:
        return fn.eval({sign * t});
      case Kind::Shell: {
        cplx acc{0.0, 0.0};
        for (auto it = shell.rbegin(); it != shell.rend(); ++it) acc = acc * t + *it;
        return acc * std::exp(-std::numbers::pi * w2 * t);
      }
      case Kind::Hyper:
        return eval_hyper(t);
    }
    return {0.0, 0.0};
  }

 private:
  cplx eval_hyper(double t) const {
    const double pi = std::numbers::pi;
    const double z = pi * w2 * t;
    std::vector<double> tpw(max_tp + 1, 1.0);
    for (int k = 1; k <= max_tp; ++k) tpw[k] = tpw[k - 1] * t;
    std::vector<double> upw(max_up + 1, 1.0);
    auto q = [&](double th) -> cplx {
      double u = std::cosh(2.0 * th);
      double ker = std::exp(-z * u);
      if (ker == 0.0) return {0.0, 0.0};
      double ch = std::cosh(th), sh = std::sinh(th);
      for (int i = 1; i <= max_up; ++i) upw[i] = upw[i - 1] * u;
      cplx s{0.0, 0.0};
      for (const auto& h : hyp)
        s += h.coef * (tpw[h.tp] * upw[h.up] * (h.pa ? ch : 1.0) * (h.pb ? sh : 1.0));
      return s * ker;
    };
    // Cutoff: start where the kernel has dropped by e^{-L}, then widen
    // until the integrand-over-decay-rate bound clears the target.
    const double L = 46.0;
    double theta = 0.5 * std::acosh(1.0 + L / std::max(z, 1e-300));
    double growth = 2 * max_up + 3;
    double scale = std::abs(q(0.0)) + std::abs(q(0.5 * theta)) + 1e-300;
    double target = theta_rtol * scale * std::max(theta, 1.0);
    while (theta < theta_cap) {
      double dec = 2.0 * z * std::sinh(2.0 * theta) - growth;
      if (dec > 1.0 && std::abs(q(theta)) <= 0.1 * target * dec) break;
      theta += 0.5;
    }
    return adaptive_gl(q, 0.0, theta, theta_rtol, 1e-300).value;
  }
};

inline FiberProfile build_profile(const SpaceDesc& d, int orbit, const CompiledTestFunction& cf,
                                  const QuadConfig& cfg) {
  const OrbitChart& oc = d.orbits.at(orbit);
  const double pi = std::numbers::pi;
  FiberProfile p;
  p.w2 = cf.w2;
  p.theta_rtol = std::max(1e-14, cfg.rel_tol * 0.01);
  p.theta_cap = cfg.theta_cap;

  auto even = [](int a) { return a % 2 == 0; };

  switch (oc.kind) {
    case ChartKind::HalfLine: {
      if (d.dim != 1) throw Error("half-line chart requires a one-dimensional space");
      p.kind = FiberProfile::Kind::Direct;
      p.fn = cf;
      p.sign = oc.sign.at(0) >= 0 ? 1.0 : -1.0;
      p.zero = cf.terms.empty();
      return p;
    }
    case ChartKind::SphereShell: {
      p.kind = FiberProfile::Kind::Shell;
      if (oc.p == 2 && d.dim == 2) {
        for (const auto& [e, c] : cf.terms) {
          if (!even(e[0]) || !even(e[1])) continue;
          int k = (e[0] + e[1]) / 2;
          if ((int)p.shell.size() <= k) p.shell.resize(k + 1, cplx{0.0, 0.0});
          p.shell[k] += c * (0.5 * pi * rat_d(detail::circle_moment(e[0] / 2, e[1] / 2)));
        }
      } else if (oc.p == 3 && d.dim == 3) {
        for (const auto& [e, c] : cf.terms) {
          if (!even(e[0]) || !even(e[1]) || !even(e[2])) continue;
          int k = (e[0] + e[1] + e[2]) / 2;
          if ((int)p.shell.size() <= k) p.shell.resize(k + 1, cplx{0.0, 0.0});
          p.shell[k] += c * (0.5 * pi * rat_d(detail::sphere3_moment(e[0] / 2, e[1] / 2, e[2] / 2)));
        }
      } else {
        throw Error("unsupported sphere shell signature");
      }
      p.zero = p.shell.empty();
      return p;
    }
    case ChartKind::HyperboloidShell: {
      p.kind = FiberProfile::Kind::Hyper;
      bool plus = oc.sign.at(0) >= 0;
      // cosh^a sinh^b -> cosh^{a%2} sinh^{b%2} ((u+1)/2)^{a/2} ((u-1)/2)^{b/2}
      // expanded in u; the combination is exact here, where coefficients
      // stay O(1), instead of at evaluation time where the powers blow up.
      auto add_hyp = [&p](int a, int b, int tp, cplx c) {
        int al = a / 2, be = b / 2;
        double nrm = std::ldexp(1.0, -(al + be));
        for (int i = 0; i <= al; ++i)
          for (int j = 0; j <= be; ++j) {
            FiberProfile::HTerm h;
            h.pa = a % 2;
            h.pb = b % 2;
            h.up = i + j;
            h.tp = tp;
            double sign = (be - j) % 2 == 0 ? 1.0 : -1.0;
            h.coef = c * (nrm * sign * detail::choose(al, i) * detail::choose(be, j));
            p.hyp.push_back(h);
          }
      };
      if (oc.p == 1 && oc.q == 1 && d.dim == 2) {
        // Two sheets and theta-folding give an overall factor 2.
        for (const auto& [e, c] : cf.terms) {
          if (!even(e[0]) || !even(e[1])) continue;
          int a = plus ? e[0] : e[1];
          int b = plus ? e[1] : e[0];
          add_hyp(a, b, (e[0] + e[1]) / 2, 2.0 * c);
        }
      } else if (oc.p == 2 && oc.q == 1 && d.dim == 3) {
        p.freeze = FreezeModel::InvSqrt;
        for (const auto& [e, c] : cf.terms) {
          if (!even(e[0]) || !even(e[1]) || !even(e[2])) continue;
          // sign > 0: cosh carries the compact pair and the Jacobian;
          // sign < 0: sinh does, and the sheet sum replaces folding.
          int a = plus ? e[0] + e[1] + 1 : e[2];
          int b = plus ? e[2] : e[0] + e[1] + 1;
          add_hyp(a, b, (e[0] + e[1] + e[2]) / 2,
                  c * (pi * rat_d(detail::circle_moment(e[0] / 2, e[1] / 2))));
        }
      } else {
        throw Error("unsupported hyperboloid shell signature");
      }
      // Merge duplicate keys so the integrand loop stays short, and
      // drop exact zeros left by the u-expansion.
      std::sort(p.hyp.begin(), p.hyp.end(), [](const auto& x, const auto& y) {
        return std::tie(x.pa, x.pb, x.up, x.tp) < std::tie(y.pa, y.pb, y.up, y.tp);
      });
      std::vector<FiberProfile::HTerm> merged;
      for (const auto& h : p.hyp) {
        if (!merged.empty() && merged.back().pa == h.pa && merged.back().pb == h.pb &&
            merged.back().up == h.up && merged.back().tp == h.tp)
          merged.back().coef += h.coef;
        else
          merged.push_back(h);
      }
      p.hyp.clear();
      for (const auto& h : merged)
        if (h.coef != cplx{0.0, 0.0}) p.hyp.push_back(h);
      for (const auto& h : p.hyp) {
        p.max_up = std::max(p.max_up, h.up);
        p.max_tp = std::max(p.max_tp, h.tp);
      }
      p.zero = p.hyp.empty();
      return p;
    }
  }
  throw Error("unknown chart kind");
}

// ---------------------------------------------------------------------------
// Radial integration over dyadic cells.

struct FiberResult {
  cplx value{0.0, 0.0};
  double err = 0;
  std::vector<std::string> flags;
};

namespace detail {

struct Cell {
  double a = 0, b = 0;
  cplx v{0.0, 0.0};
  double e = 0;
};

// int_0^eps t^{q-1} dt and int_0^eps t^{q-1} ln t dt.
inline cplx tail_power(double eps, cplx q) { return std::pow(eps, q) / q; }
inline cplx tail_power_log(double eps, cplx q) {
  return std::pow(eps, q) * (std::log(eps) * q - 1.0) / (q * q);
}

}  // namespace detail

template <class H>
FiberResult fiber_integrate(H&& h, FreezeModel fm, cplx s_eff, const QuadConfig& cfg) {
  const cplx sp = s_eff;
  const double x = sp.real();
  const double x_min = fm == FreezeModel::InvSqrt ? 0.5 : 0.0;
  if (!(x > x_min))
    throw OutOfRangeError("fiber exponent must satisfy Re s > " + std::to_string(x_min));

  auto wf = [&](double t) -> cplx { return std::pow(t, sp - 1.0) * h(t); };
  const GLRule& lo = gauss_legendre(16);
  const GLRule& hi = gauss_legendre(24);
  long evals = 0;
  auto eval_cell = [&](double a, double b) -> detail::Cell {
    detail::Cell c;
    c.a = a;
    c.b = b;
    c.v = gl_apply(wf, a, b, hi, evals);
    c.e = std::abs(c.v - gl_apply(wf, a, b, lo, evals));
    return c;
  };

  FiberResult out;
  std::vector<detail::Cell> cells;

  // Upward sweep: dyadic cells until three consecutive negligible ones.
  double magmax = 0;
  double tail_est = 0;
  int quiet = 0;
  bool top_reached = false;
  for (int m = 0;; ++m) {
    double a = std::ldexp(1.0, m);
    if (2 * a > cfg.radial_cutoff) {
      top_reached = true;
      break;
    }
    detail::Cell c = eval_cell(a, 2 * a);
    cells.push_back(c);
    magmax = std::max(magmax, std::abs(c.v));
    quiet = (std::abs(c.v) <= 1e-22 * (magmax + 1e-300)) ? quiet + 1 : 0;
    if (quiet >= 3 && m >= 3) break;
  }
  if (top_reached && !cells.empty()) {
    tail_est = std::abs(cells.back().v);
    if (tail_est > 1e-15 * (magmax + 1e-300)) out.flags.push_back("QuadratureFailure(radial-cutoff)");
  }

  // Downward sweep to the initial freeze depth.
  int m_lo = -8;
  for (int m = -1; m >= m_lo; --m) {
    detail::Cell c = eval_cell(std::ldexp(1.0, m), std::ldexp(1.0, m + 1));
    cells.push_back(c);
  }

  // Close the lower end: fit the chart's small-t model at eps, eps/2,
  // ... and integrate it exactly; the fit residual one octave below the
  // fit points scales the error bound. Deepen until it clears the
  // budget.
  cplx freeze_val{0.0, 0.0};
  double freeze_err = 0;
  // Cancellation floor: the unsigned mass bounds the absolute accuracy
  // the rule can certify, so integrals that vanish by symmetry settle
  // at machine precision instead of exhausting the split budget.
  auto current_tol = [&]() {
    KahanC tot;
    double mass = 0;
    for (const auto& c : cells) {
      tot.add(c.v);
      mass += std::abs(c.v);
    }
    tot.add(freeze_val);
    mass += std::abs(freeze_val);
    return std::max({cfg.rel_tol * std::abs(tot.get()), 5e-16 * mass, 1e-300});
  };
  for (;;) {
    double eps = std::ldexp(1.0, m_lo);
    if (fm == FreezeModel::LogFlat) {
      cplx h1 = h(eps), h2 = h(0.5 * eps), h4 = h(0.25 * eps);
      cplx B = (h1 - h2) / std::log(2.0);
      cplx A = h1 - B * std::log(eps);
      double resid = std::abs(h4 - A - B * std::log(0.25 * eps));
      freeze_val = A * detail::tail_power(eps, sp) + B * detail::tail_power_log(eps, sp);
      freeze_err = 8.0 * resid * std::abs(std::pow(eps, sp)) / x + 1e-300;
    } else {
      // h ~ C t^{-1/2} + A + B t^{1/2}; three-point collocation.
      double r = std::sqrt(eps), s2 = std::sqrt(2.0);
      cplx h1 = h(eps), h2 = h(0.5 * eps), h4 = h(0.25 * eps), h8 = h(0.125 * eps);
      double a11 = 1 / r, a12 = 1, a13 = r;
      double a21 = s2 / r, a22 = 1, a23 = r / s2;
      double a31 = 2 / r, a32 = 1, a33 = r / 2;
      double det = a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
                   a13 * (a21 * a32 - a22 * a31);
      cplx C = (h1 * (a22 * a33 - a23 * a32) - a12 * (h2 * a33 - h4 * a23) +
                a13 * (h2 * a32 - h4 * a22)) /
               det;
      cplx A = (a11 * (h2 * a33 - h4 * a23) - h1 * (a21 * a33 - a23 * a31) +
                a13 * (a21 * h4 - a31 * h2)) /
               det;
      cplx B = (a11 * (a22 * h4 - a32 * h2) - a12 * (a21 * h4 - a31 * h2) +
                h1 * (a21 * a32 - a22 * a31)) /
               det;
      double resid = std::abs(h8 - (C * (2 * s2 / r) + A + B * (r / (2 * s2))));
      freeze_val = C * detail::tail_power(eps, sp - 0.5) + A * detail::tail_power(eps, sp) +
                   B * detail::tail_power(eps, sp + 0.5);
      freeze_err = 8.0 * resid * std::abs(std::pow(eps, sp)) *
                       (1.0 / x + 1.0 / std::max(x - 0.5, 1e-12)) +
                   1e-300;
    }
    if (freeze_err <= 0.25 * current_tol() || m_lo <= -64) {
      if (m_lo <= -64 && freeze_err > 0.25 * current_tol())
        out.flags.push_back("QuadratureFailure(freeze)");
      break;
    }
    for (int m = m_lo - 1; m >= m_lo - 2; --m)
      cells.push_back(eval_cell(std::ldexp(1.0, m), std::ldexp(1.0, m + 1)));
    m_lo -= 2;
  }

  // Refine the worst cell until the combined estimate clears the budget.
  int splits = 0;
  for (;;) {
    double cell_err = 0;
    for (const auto& c : cells) cell_err += c.e;
    if (cell_err + freeze_err + tail_est <= current_tol() || splits >= cfg.max_subdivisions) {
      if (splits >= cfg.max_subdivisions) out.flags.push_back("QuadratureFailure(budget)");
      break;
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < cells.size(); ++i)
      if (cells[i].e > cells[worst].e) worst = i;
    detail::Cell c = cells[worst];
    double mid = 0.5 * (c.a + c.b);
    cells[worst] = eval_cell(c.a, mid);
    cells.insert(cells.begin() + worst + 1, eval_cell(mid, c.b));
    ++splits;
  }

  KahanC tot;
  for (const auto& c : cells) tot.add(c.v);
  tot.add(freeze_val);
  out.value = tot.get();
  double cell_err = 0;
  for (const auto& c : cells) cell_err += c.e;
  out.err = cell_err + freeze_err + tail_est;
  return out;
}

// ---------------------------------------------------------------------------
// Engine entry points.

namespace detail {

struct OrbitSum {
  std::vector<cplx> z;
  std::vector<double> err;
  std::vector<std::string> flags;
};

inline OrbitSum eval_orbits(const SpaceDesc& d, const TestFunction& xi, cplx s_eff,
                            const QuadConfig& cfg) {
  CompiledTestFunction cf = xi.compile();
  OrbitSum out;
  for (int i = 0; i < d.k_orbits(); ++i) {
    FiberProfile prof = build_profile(d, i, cf, cfg);
    if (prof.zero) {
      out.z.push_back({0.0, 0.0});
      out.err.push_back(0.0);
      continue;
    }
    FiberResult r = fiber_integrate([&](double t) { return prof.eval(t); }, prof.freeze, s_eff, cfg);
    out.z.push_back(r.value);
    out.err.push_back(r.err);
    for (const auto& fl : r.flags) out.flags.push_back("orbit" + std::to_string(i) + ":" + fl);
  }
  return out;
}

inline void check_args(const SpaceDesc& d, const EtaVector& eta, const TestFunction& xi) {
  d.require_rank1();
  if ((int)eta.c.size() != d.k_orbits())
    throw UsageError("eta length " + std::to_string(eta.c.size()) + " does not match orbit count " +
                     std::to_string(d.k_orbits()));
  if (xi.n != d.dim) throw UsageError("test function dimension does not match the space");
}

}  // namespace detail

// Radial exponent below which some orbit integral diverges at t -> 0;
// in descriptor terms this is kappa shifted to the s coordinate.
inline double convergence_edge_s(const SpaceDesc& d) {
  return rat_d(d.kappa.at(0) + d.lambda0_own());
}

// Convergent-range evaluation; requires Re s past the descriptor's
// convergence edge (strict). The optional twist adds a fixed offset to
// the radial exponent in shared lambda coordinates: the integrand gains
// |f|^{orientation*twist}.
inline ZetaValue z_convergent(const SpaceDesc& d, const EtaVector& eta, const TestFunction& xi,
                              cplx lambda, const QuadConfig& cfg = {}, cplx twist = cplx{0.0, 0.0}) {
  detail::check_args(d, eta, xi);
  cplx s_eff = mellin_exponent(d, lambda + twist);
  const double edge = convergence_edge_s(d);
  if (!(s_eff.real() > edge))
    throw OutOfRangeError("z_convergent requires Re s > " + std::to_string(edge) +
                          ", got Re s = " + std::to_string(s_eff.real()));
  detail::OrbitSum os = detail::eval_orbits(d, xi, s_eff, cfg);
  ZetaValue v;
  v.lambda = lambda;
  v.orbit_breakdown = os.z;
  v.flags = os.flags;
  KahanC acc;
  for (int i = 0; i < d.k_orbits(); ++i) {
    acc.add(eta.c[i] * os.z[i]);
    v.abs_error_estimate += std::abs(eta.c[i]) * os.err[i];
  }
  v.value = acc.get();
  return v;
}

// Meromorphic continuation by the descent recursion. force_M < 0 picks
// the least M >= 0 that lands the shifted exponent inside the
// convergent range.
inline ZetaValue z_continued(const SpaceDesc& d, const EtaVector& eta, const TestFunction& xi,
                             cplx lambda, const QuadConfig& cfg = {}, int force_M = -1,
                             cplx twist = cplx{0.0, 0.0}) {
  detail::check_args(d, eta, xi);
  cplx s_eff = mellin_exponent(d, lambda + twist);
  const double edge = convergence_edge_s(d);
  int M = force_M >= 0
              ? force_M
              : std::max(0, (int)std::floor(edge - s_eff.real()) + 1);

  ZetaValue v;
  v.lambda = lambda;
  v.M_used = M;
  if (pole_distance(d, lambda + twist) < cfg.pole_eps)
    v.flags.push_back(pole_flag_text(d, lambda + twist));

  if (M == 0) {
    ZetaValue w = z_convergent(d, eta, xi, lambda, cfg, twist);
    w.flags.insert(w.flags.begin(), v.flags.begin(), v.flags.end());
    w.M_used = 0;
    return w;
  }

  TestFunction xs = xi.apply_op(d.fdual.at(0).pow(M));
  cplx sigma = s_eff - rat_d(sigma_mu(d));
  cplx denom{1.0, 0.0};
  for (int j = 0; j < M; ++j) denom *= d.bfun.at(0).eval(sigma + static_cast<double>(j));
  double sgn = (M * d.deg_fdual()) % 2 == 0 ? 1.0 : -1.0;

  detail::OrbitSum os = detail::eval_orbits(d, xs, s_eff + static_cast<double>(M), cfg);
  for (const auto& fl : os.flags) v.flags.push_back(fl);

  KahanC acc;
  for (int i = 0; i < d.k_orbits(); ++i) {
    Rat eps_i = rescale_factor(d.f.at(0), d.fdual.at(0), Rat(d.orbits[i].sign.at(0)));
    cplx factor = rat_d(rat_pow(eps_i, -M)) * sgn / denom;
    cplx zi = factor * os.z[i];
    v.orbit_breakdown.push_back(zi);
    acc.add(eta.c[i] * zi);
    v.abs_error_estimate += std::abs(eta.c[i]) * std::abs(factor) * os.err[i];
  }
  v.value = acc.get();
  return v;
}

// Residue at a pole candidate lambda0: 8-point circular contour of
// radius 1e-2 with one Richardson halving; the two estimates must agree.
inline cplx residue_estimate(const SpaceDesc& d, const EtaVector& eta, const TestFunction& xi,
                             cplx lambda0, const QuadConfig& cfg = {}) {
  auto ring = [&](double r) -> cplx {
    const int N = 8;
    KahanC acc;
    for (int j = 0; j < N; ++j) {
      double th = 2.0 * std::numbers::pi * j / N;
      cplx w = std::polar(r, th);
      acc.add(z_continued(d, eta, xi, lambda0 + w, cfg).value * w);
    }
    return acc.get() / static_cast<double>(N);
  };
  cplx r1 = ring(1e-2);
  cplx r2 = ring(5e-3);
  if (std::abs(r1 - r2) > 1e-3 * (std::abs(r2) + 1e-6))
    throw InconsistentError("residue estimates disagree: |r1-r2| = " +
                            std::to_string(std::abs(r1 - r2)));
  return r2 + (r2 - r1) / 255.0;
}

// Pole-normalized value: the product of reciprocal Gamma factors times
// Z. Entire in lambda; near a pole candidate the value is recovered
// from a 4-point circle mean of the same normalized combination.
inline ZetaValue lz(const SpaceDesc& d, const EtaVector& eta, const TestFunction& xi, cplx lambda,
                    const QuadConfig& cfg = {}) {
  auto gs = gamma_factors(d);
  auto normalized = [&](cplx l) -> ZetaValue {
    ZetaValue z = z_continued(d, eta, xi, l, cfg);
    cplx lg{0.0, 0.0};
    for (const auto& g : gs) lg += lgamma_c(g.eval(l));
    cplx L = std::exp(-lg);
    z.value *= L;
    for (auto& b : z.orbit_breakdown) b *= L;
    z.abs_error_estimate *= std::abs(L);
    return z;
  };
  if (pole_distance(d, lambda) >= cfg.pole_eps) return normalized(lambda);
  const double r = 1e-3;
  ZetaValue out;
  out.lambda = lambda;
  out.flags.push_back("RegularizedAtPole");
  out.orbit_breakdown.assign(d.k_orbits(), cplx{0.0, 0.0});
  std::vector<cplx> vals;
  for (int j = 0; j < 4; ++j) {
    cplx w = std::polar(r, 0.5 * std::numbers::pi * j);
    ZetaValue z = normalized(lambda + w);
    vals.push_back(z.value);
    for (int i = 0; i < d.k_orbits(); ++i) out.orbit_breakdown[i] += 0.25 * z.orbit_breakdown[i];
    out.abs_error_estimate += 0.25 * z.abs_error_estimate;
    out.M_used = std::max(out.M_used, z.M_used);
  }
  KahanC acc;
  for (const auto& v : vals) acc.add(0.25 * v);
  out.value = acc.get();
  double spread = 0;
  for (const auto& v : vals) spread = std::max(spread, std::abs(v - out.value));
  out.abs_error_estimate += spread * r;
  return out;
}

}  // namespace pvz
