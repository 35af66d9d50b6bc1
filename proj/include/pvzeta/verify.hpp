#pragma once

// Named verification suite for one descriptor: symbolic certification,
// closed-form oracles, continuation and functional-equation identities,
// pole behavior, and deterministic artifact generation. Shared by the
// command-line front end and the acceptance harness.

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pvzeta/emit.hpp"
#include "pvzeta/gamma_matrix.hpp"
#include "pvzeta/space.hpp"
#include "pvzeta/symbolic_power.hpp"
#include "pvzeta/zeta.hpp"

namespace pvz {

struct VerifyCheck {
  std::string id;
  bool pass = false;
  double value = 0;  // measured deviation (0 for exact boolean checks)
  double tol = 0;
  std::string detail;
};

struct VerifyReport {
  std::string space;
  std::vector<VerifyCheck> checks;
  std::vector<std::pair<std::string, std::string>> artifacts;  // filename -> content

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

inline double rel_dev(cplx got, cplx want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Grid evaluation with a deterministic row order. Worker threads take
// rows by stride, so the assembled table is independent of the split.
inline std::vector<ZetaRow> zeta_grid(const SpaceDesc& d, const EtaVector& eta,
                                      const TestFunction& xi, const std::vector<cplx>& grid,
                                      const QuadConfig& cfg, int threads) {
  std::vector<ZetaRow> rows(grid.size());
  auto work = [&](int t0, int stride) {
    for (std::size_t i = t0; i < grid.size(); i += stride) {
      rows[i].lambda = grid[i];
      rows[i].z = z_continued(d, eta, xi, grid[i], cfg);
    }
  };
  int t = std::max(1, threads);
  if (t == 1 || grid.size() < 2) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < t; ++i) pool.emplace_back(work, i, t);
    for (auto& th : pool) th.join();
  }
  // Grid-level pole annotation: rows within one step of a pole
  // candidate are marked even when the engine itself is not near it.
  double step = grid.size() > 1 ? std::abs(grid[1] - grid[0]) : 0.0;
  for (auto& r : rows)
    if (step > 0 && pole_distance(d, r.lambda) <= 1.000001 * step &&
        pole_distance(d, r.lambda) >= cfg.pole_eps)
      r.extra_flags.push_back("NearPole(grid-adjacent)");
  return rows;
}

inline std::vector<cplx> linspace(cplx a, cplx b, int n) {
  std::vector<cplx> g;
  if (n <= 1) {
    g.push_back(a);
    return g;
  }
  for (int i = 0; i < n; ++i)
    g.push_back(a + (b - a) * (static_cast<double>(i) / (n - 1)));
  return g;
}

// Closed-form strip value of Z with unit eta weights (orbit 0 only for
// the two-sheet indefinite ternary chart).
inline bool strip_oracle(const SpaceDesc& d, cplx s, cplx* want, EtaVector* eta) {
  const double pi = std::numbers::pi;
  *eta = eta_ones(d.k_orbits());
  if (d.name == "TATE") {
    *want = tgamma_r(s);
    return true;
  }
  if (d.name == "QF_2_0") {
    *want = std::pow(pi, 1.0 - s) * tgamma_c(s);
    return true;
  }
  if (d.name == "QF_3_0") {
    *want = 2.0 * std::pow(pi, 1.0 - s) * tgamma_c(s);
    return true;
  }
  if (d.name == "QF_1_1") {
    *want = std::pow(2.0, s - 1.0) * std::pow(pi, -s) * tgamma_c(0.5 * s) * tgamma_c(0.5 * s);
    return true;
  }
  if (d.name == "QF_2_1") {
    *eta = eta_unit(d.k_orbits(), 0);
    *want = std::pow(pi, 1.5 - s) * tgamma_c(s - 0.5) / std::sqrt(2.0);
    return true;
  }
  return false;
}

}  // namespace detail

// Fixed evaluation points per descriptor, chosen off the pole lattice.
struct VerifyPoints {
  cplx lambda_star;   // generic gamma-extraction point
  cplx lambda_strip;  // both functional-equation sides convergent here
  double tol;         // identity tolerance for this dimension
};

inline VerifyPoints verify_points(const SpaceDesc& d) {
  if (d.dim == 1) return {cplx{0.13, 0.0}, cplx{-0.1, 0.0}, 1e-6};
  if (d.name == "QF_2_1") return {cplx{0.3, 0.0}, cplx{-0.05, 0.0}, 1e-4};
  if (d.name == "QF_3_0") return {cplx{0.2, 0.0}, cplx{0.0, 0.0}, 1e-4};
  if (d.name == "QF_1_1") return {cplx{0.3, 0.0}, cplx{-0.1, 0.0}, 1e-4};
  return {cplx{0.2, 0.0}, cplx{-0.1, 0.0}, 1e-4};
}

inline VerifyReport run_verify(const SpaceDesc& d, const QuadConfig& cfg = {}, int threads = 1) {
  VerifyReport rep;
  rep.space = d.name;
  const VerifyPoints pts = verify_points(d);
  const PsiCharacter psi1{Rat(1)};
  auto add = [&](const std::string& id, double value, double tol, const std::string& detail) {
    rep.checks.push_back({id, value <= tol, value, tol, detail});
  };

  // Symbolic layer: descriptor validation plus the defining identity at
  // integer exponents by ordinary differentiation.
  {
    bool ok = validate(d).all_pass();
    for (long m : {0L, 1L, 2L, 3L}) {
      QPoly lhs = plain_apply(d.fdual[0], d.f[0].pow(static_cast<int>(m) + 1));
      QPoly rhs = d.f[0].pow(static_cast<int>(m)).scaled_rat(d.bfun[0].eval(Rat(m)));
      if (!(lhs == rhs)) ok = false;
    }
    add("symbolic-certification", ok ? 0.0 : 1.0, 0.0,
        "exact eigen identity and integer specializations s in {0..3}");
  }

  // Exact Capelli laws.
  {
    bool ok = true;
    for (int M : {1, 2}) {
      for (int m = -2; m <= 2; ++m)
        if (!twist_shift_check(d.f[0], d.fdual[0], M, m)) ok = false;
      if (leading_coeff_at(capelli_eigenvalue(d.f[0], d.fdual[0], M), Rat(-2)) == 0) ok = false;
    }
    add("capelli-laws", ok ? 0.0 : 1.0, 0.0,
        "twist shifts M in {1,2}, m in {-2..2}; top coefficient nonzero");
  }

  // Closed-form strip oracle.
  {
    double dev = 0;
    for (double soff : {0.3, 0.8}) {
      cplx s = cplx{rat_d(sigma_mu(d)) + soff, 0.0};
      cplx lambda = s - rat_d(d.lambda0_own());
      cplx want;
      EtaVector eta;
      if (detail::strip_oracle(d, s, &want, &eta)) {
        ZetaValue z = z_convergent(d, eta, TestFunction::gaussian(d.dim), lambda, cfg);
        dev = std::max(dev, detail::rel_dev(z.value, want));
      }
    }
    add("strip-oracle", dev, 1e-7, "gaussian zeta against the closed form");
  }

  // Continuation consistency: forced descent reproduces the convergent
  // value inside the convergent range.
  {
    double dev = 0;
    auto basis = hermite_basis(d.dim, 2);
    basis.resize(std::min<std::size_t>(basis.size(), 3));
    for (double s_re : {1.6, 2.2}) {
      cplx lambda = cplx{s_re, 0.0} - rat_d(d.lambda0_own());
      for (const auto& xi : basis) {
        ZetaValue direct = z_convergent(d, eta_ones(d.k_orbits()), xi, lambda, cfg);
        for (int M : {1, 2}) {
          ZetaValue cont = z_continued(d, eta_ones(d.k_orbits()), xi, lambda, cfg, M);
          double scale = std::max(std::abs(direct.value), 1.0);
          dev = std::max(dev, std::abs(cont.value - direct.value) / scale);
        }
      }
    }
    add("continuation-consistency", dev, 1e-6, "forced M in {1,2} against the direct value");
  }

  // Residue oracles where a closed form is pinned.
  if (d.name == "TATE" || d.name == "QF_2_0" || d.name == "QF_2_1") {
    cplx lambda0, want;
    if (d.name == "TATE") {
      lambda0 = cplx{-0.5, 0.0};
      want = 2.0;
    } else if (d.name == "QF_2_0") {
      lambda0 = cplx{-0.5, 0.0};
      want = std::numbers::pi;
    } else {
      lambda0 = cplx{-0.25, 0.0};
      want = std::numbers::pi * std::sqrt(2.0);
    }
    cplx res = residue_estimate(d, eta_ones(d.k_orbits()), TestFunction::gaussian(d.dim),
                                lambda0, cfg);
    add("pole-residue", detail::rel_dev(res, want), 1e-3, "contour residue at the first pole");
  }

  // Pole-normalized value stays finite at the nearest pole candidate.
  {
    auto gs = gamma_factors(d);
    Rat lam0 = (Rat(0) - gs.at(0).intercept) / Rat(gs.at(0).slope);
    ZetaValue at = lz(d, eta_ones(d.k_orbits()), TestFunction::gaussian(d.dim),
                      cplx{rat_d(lam0), 0.0}, cfg);
    bool finite = std::isfinite(at.value.real()) && std::isfinite(at.value.imag());
    add("pole-normalized", finite ? 0.0 : 1.0, 0.0,
        "gamma-normalized value finite at the pole candidate");
  }

  // Functional-equation oracles in dimension <= 2.
  if (d.name == "TATE") {
    double dev = 0;
    for (double s : {0.3, 0.5}) {
      GammaMatrix g = extract_gamma(d, cplx{s - 0.5, 0.0}, psi1, 6, cfg);
      std::vector<cplx> even = g.apply({cplx{1, 0}, cplx{1, 0}});
      std::vector<cplx> odd = g.apply({cplx{1, 0}, cplx{-1, 0}});
      cplx ew = tgamma_r(cplx{1.0 - s, 0.0}) / tgamma_r(cplx{s, 0.0});
      cplx ow = cplx{0.0, 1.0} * tgamma_r(cplx{2.0 - s, 0.0}) / tgamma_r(cplx{1.0 + s, 0.0});
      dev = std::max(dev, detail::rel_dev(0.5 * (even[0] + even[1]), ew));
      dev = std::max(dev, detail::rel_dev(0.5 * (odd[0] - odd[1]), ow));
    }
    add("fe-oracle", dev, 1e-6, "even/odd transfer against the classical factors");
  } else if (d.name == "QF_2_0") {
    cplx s = pts.lambda_star + 0.5;
    GammaMatrix g = extract_gamma(d, pts.lambda_star, psi1, 4, cfg);
    cplx want = std::pow(std::numbers::pi, 2.0 * s - 1.0) * tgamma_c(1.0 - s) / tgamma_c(s);
    add("fe-oracle", detail::rel_dev(g.entries[0][0], want), 1e-5,
        "transfer scalar against the closed form");
  }

  // Strip extraction equals forced-descent extraction.
  {
    GammaMatrix a = extract_gamma(d, pts.lambda_strip, psi1, 2 * d.k_orbits() + 2, cfg);
    GammaMatrix b = extract_gamma(d, pts.lambda_strip, psi1, 2 * d.k_orbits() + 2, cfg, 2);
    add("fe-strip-agreement", detail::matrix_deviation(b.entries, a.entries), pts.tol,
        "no-continuation extraction against forced descent");
  }

  // Transfer-matrix identity suite.
  {
    double dev = check_inversion(d, pts.lambda_star, psi1, cfg).deviation;
    if (d.dim == 1)
      dev = std::max(dev, check_inversion(d, pts.lambda_star, PsiCharacter{Rat(2)}, cfg).deviation);
    add("gamma-inversion", dev, pts.tol, "reflected composition is A(psi) id");
  }
  {
    double dev = check_scaling(d, pts.lambda_star, Rat(2), cfg).deviation;
    dev = std::max(dev, check_scaling(d, pts.lambda_star, Rat(-1), cfg).deviation);
    dev = std::max(dev, check_scaling_selfdual(d, Rat(-1), cfg).deviation);
    add("gamma-scaling", dev, pts.tol, "dilated characters a in {2,-1} and unitary variant");
  }
  {
    cplx mu = d.dim == 1 ? cplx{0.05, 0.0} : cplx{0.1, 0.0};
    double dev = check_translation(d, pts.lambda_star, mu, psi1, cfg).deviation;
    add("translation-shift", dev, pts.tol, "shifted-family extraction matches");
  }
  {
    double dev = check_hM_shift(d, pts.lambda_star, 1, psi1, cfg).deviation;
    if (d.dim == 1) dev = std::max(dev, check_hM_shift(d, pts.lambda_star, 2, psi1, cfg).deviation);
    add("hM-shift", dev, pts.tol, "invariant-square multiplication shifts the parameter");
  }

  // Vertical line probe: pole-normalized values finite and unflagged.
  {
    cplx base = cplx{0.25 - rat_d(d.lambda0_own()), 0.0};
    bool ok = true;
    for (int i = -4; i <= 4; ++i) {
      ZetaValue v = lz(d, eta_ones(d.k_orbits()), TestFunction::gaussian(d.dim),
                       base + cplx{0.0, 5.0 * i}, cfg);
      if (!std::isfinite(v.value.real()) || !std::isfinite(v.value.imag())) ok = false;
      for (const auto& f : v.flags)
        if (f.find("NearPole") != std::string::npos) ok = false;
    }
    add("strip-boundedness", ok ? 0.0 : 1.0, 0.0,
        "normalized values finite and unflagged on a vertical line");
  }

  // Deterministic artifacts, generated twice and compared bytewise.
  {
    auto make = [&]() {
      std::vector<std::pair<std::string, std::string>> art;
      auto grid = detail::linspace(cplx{-0.4, 0.0}, cplx{2.0, 0.0}, 25);
      auto rows =
          detail::zeta_grid(d, eta_ones(d.k_orbits()), TestFunction::gaussian(d.dim), grid,
                            cfg, threads);
      art.emplace_back(d.name + "_zeta.csv", zeta_csv(d, rows));
      GammaMatrix g = extract_gamma(d, pts.lambda_star, psi1, 2 * d.k_orbits() + 2, cfg);
      art.emplace_back(d.name + "_gamma.json", json_text(gamma_to_json(d, g)));
      art.emplace_back(d.name + "_poles.json", json_text(poles_to_json(d, 4)));
      return art;
    };
    auto first = make();
    auto second = make();
    bool same = first == second;
    add("determinism", same ? 0.0 : 1.0, 0.0, "regenerated artifacts are byte-identical");
    rep.artifacts = std::move(first);
  }

  return rep;
}

}  // namespace pvz
