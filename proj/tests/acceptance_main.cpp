// Acceptance gate: one line per criterion, exit 0 only if every
// criterion passes, including its runtime budget. Tolerances are pinned
// here and nowhere else.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "pvzeta/verify.hpp"

using namespace pvz;

namespace {

double rel(cplx got, cplx want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

std::string fail_at(const std::string& where, double dev, double tol) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s: deviation %.3e exceeds %.1e", where.c_str(), dev, tol);
  return buf;
}

// s-coordinate to lambda for a descriptor (inverse of the Mellin map).
double lambda_for_s(const SpaceDesc& d, double s) {
  return d.orientation * s - rat_d(d.lambda0.at(0));
}

bool crit_symbolic(std::string& why) {
  for (const auto& nm : builtin_names()) {
    const SpaceDesc& d = builtin_space(nm);
    if (!validate(d).all_pass()) {
      why = nm + ": descriptor validation failed";
      return false;
    }
    if (!(b_function(d.f.at(0), d.fdual.at(0)) == d.bfun.at(0))) {
      why = nm + ": certified polynomial does not match the eigen identity";
      return false;
    }
    for (int m = 0; m <= 3; ++m) {
      QPoly lhs = plain_apply(d.fdual.at(0), d.f.at(0).pow(m + 1));
      QPoly rhs = d.f.at(0).pow(m).scaled_rat(d.bfun.at(0).eval(Rat(m)));
      if (!(lhs == rhs)) {
        why = nm + ": integer specialization failed at exponent " + std::to_string(m);
        return false;
      }
    }
  }
  return true;
}

bool crit_dim1_closed_form(std::string& why) {
  const SpaceDesc& d = builtin_space("TATE");
  TestFunction xi = TestFunction::gaussian(1);
  const struct {
    double lam, want;
  } pts[] = {{0.5, 1.0}, {1.5, 1.0 / std::numbers::pi}};
  for (const auto& p : pts) {
    ZetaValue z = z_convergent(d, eta_ones(d.k_orbits()), xi, cplx{p.lam, 0.0});
    if (rel(z.value, cplx{p.want, 0.0}) > 1e-8) {
      why = fail_at("lambda = " + std::to_string(p.lam), rel(z.value, cplx{p.want, 0.0}), 1e-8);
      return false;
    }
  }
  return true;
}

bool crit_continuation(std::string& why) {
  QuadConfig cfg;
  cfg.rel_tol = 1e-8;
  const double s_grid[] = {0.6, 1.0, 1.6, 2.2, 3.0};
  for (const auto& nm : builtin_names()) {
    const SpaceDesc& d = builtin_space(nm);
    auto basis = hermite_basis(d.dim, 2);
    for (double s : s_grid) {
      cplx lam{lambda_for_s(d, s), 0.0};
      for (int i = 0; i < d.k_orbits(); ++i) {
        EtaVector eta = eta_unit(d.k_orbits(), i);
        for (std::size_t b = 0; b < basis.size(); ++b) {
          ZetaValue direct = z_convergent(d, eta, basis[b], lam, cfg);
          for (int M = 1; M <= 3; ++M) {
            ZetaValue forced = z_continued(d, eta, basis[b], lam, cfg, M);
            double dev = std::abs(forced.value - direct.value);
            bool ok = std::abs(direct.value) > 1e-10 ? dev / std::abs(direct.value) < 1e-6
                                                     : dev < 1e-10;
            if (!ok) {
              why = fail_at(nm + " s=" + std::to_string(s) + " orbit " + std::to_string(i) +
                                " xi#" + std::to_string(b) + " M=" + std::to_string(M),
                            dev / std::max(std::abs(direct.value), 1e-10), 1e-6);
              return false;
            }
          }
        }
      }
    }
  }
  return true;
}

bool crit_pole_residue(std::string& why) {
  const SpaceDesc& d = builtin_space("TATE");
  TestFunction xi = TestFunction::gaussian(1);
  EtaVector eta = eta_ones(d.k_orbits());
  const cplx pole{-0.5, 0.0};

  cplx res = residue_estimate(d, eta, xi, pole);
  if (rel(res, cplx{2.0, 0.0}) > 1e-4) {
    why = fail_at("contour residue", rel(res, cplx{2.0, 0.0}), 1e-4);
    return false;
  }

  // Normalized value stays bounded on the punctured disk: the inner
  // ring may not blow up relative to the outer one.
  auto ring_max = [&](double r) {
    double mx = 0;
    for (int j = 0; j < 8; ++j) {
      double th = 2.0 * std::numbers::pi * j / 8;
      ZetaValue v = lz(d, eta, xi, pole + std::polar(r, th));
      if (!std::isfinite(v.value.real()) || !std::isfinite(v.value.imag())) return -1.0;
      mx = std::max(mx, std::abs(v.value));
    }
    return mx;
  };
  double outer = ring_max(1e-2), inner = ring_max(2e-3);
  if (outer < 0 || inner < 0) {
    why = "normalized value is not finite on the disk";
    return false;
  }
  if (!(inner < 2.0 * outer + 1.0)) {
    why = "normalized value grows toward the pole: inner " + std::to_string(inner) +
          " vs outer " + std::to_string(outer);
    return false;
  }
  return true;
}

bool crit_functional_equation(std::string& why) {
  const SpaceDesc& d = builtin_space("TATE");
  const SpaceDesc& dd = builtin_space("TATE_DUAL");
  PsiCharacter psi{Rat(1)};
  TestFunction probe = hermite_basis(1, 2).at(0);
  for (int j = 1; j <= 9; ++j) {
    double s = 0.1 * j;
    cplx lam{s - 0.5, 0.0};

    // Both sides must converge in the strip with no descent.
    ZetaValue zp = z_continued(d, eta_ones(2), probe, lam);
    ZetaValue zd = z_continued(dd, eta_ones(2), fourier(probe, psi), lam);
    if (zp.M_used != 0 || zd.M_used != 0) {
      why = "descent used inside the convergence strip at s = " + std::to_string(s);
      return false;
    }

    GammaMatrix g = extract_gamma(d, lam, psi, 6);
    auto a = g.apply({cplx{1, 0}, cplx{1, 0}});
    auto b = g.apply({cplx{1, 0}, cplx{-1, 0}});
    cplx even = (a[0] + a[1]) / 2.0;
    cplx odd = (b[0] - b[1]) / 2.0;
    cplx want = tgamma_r(cplx{1.0 - s, 0.0}) / tgamma_r(cplx{s, 0.0});
    if (rel(even, want) > 1e-6) {
      why = fail_at("even factor at s = " + std::to_string(s), rel(even, want), 1e-6);
      return false;
    }
    if (j == 5) {
      if (std::abs(even - cplx{1.0, 0.0}) > 1e-6 || std::abs(std::abs(odd) - 1.0) > 1e-6) {
        why = "central values off: even " + std::to_string(std::abs(even)) + ", |odd| " +
              std::to_string(std::abs(odd));
        return false;
      }
    }
  }
  return true;
}

bool crit_gamma_identities(std::string& why) {
  struct Inv {
    const char* space;
    double lam;
    Rat a;
    double tol;
  };
  const Inv inversions[] = {{"TATE", 0.13, Rat(1), 1e-6},
                            {"TATE", 0.13, Rat(2), 1e-6},
                            {"QF_2_0", 0.2, Rat(1), 1e-4},
                            {"QF_1_1", 0.3, Rat(1), 1e-4}};
  for (const auto& t : inversions) {
    GammaCheck c = check_inversion(builtin_space(t.space), cplx{t.lam, 0.0}, PsiCharacter{t.a});
    if (!(c.deviation < t.tol)) {
      why = fail_at(std::string(t.space) + " inversion psi_" + rat_str(t.a), c.deviation, t.tol);
      return false;
    }
  }

  struct Scale {
    const char* space;
    double lam;
    long a;
    double tol;
  };
  const Scale scalings[] = {{"TATE", 0.1, 2, 1e-6},   {"TATE", 0.1, -1, 1e-6},
                            {"QF_2_0", 0.2, 2, 1e-4}, {"QF_2_0", 0.2, -1, 1e-4},
                            {"QF_1_1", 0.3, 2, 1e-4}, {"QF_1_1", 0.3, -1, 1e-4}};
  for (const auto& t : scalings) {
    GammaCheck c = check_scaling(builtin_space(t.space), cplx{t.lam, 0.0}, Rat(t.a));
    if (!(c.deviation < t.tol)) {
      why = fail_at(std::string(t.space) + " scaling a=" + std::to_string(t.a), c.deviation,
                    t.tol);
      return false;
    }
    if (std::string(t.space) == "TATE" && t.a == -1 &&
        c.notes.at(0) != "orbit permutation nontrivial") {
      why = "sign flip did not permute the orbits";
      return false;
    }
  }

  const Scale selfduals[] = {{"TATE", 0.0, 2, 1e-6},
                             {"TATE", 0.0, -1, 1e-6},
                             {"QF_2_0", 0.0, -1, 1e-4},
                             {"QF_1_1", 0.0, -1, 1e-4}};
  for (const auto& t : selfduals) {
    GammaCheck c = check_scaling_selfdual(builtin_space(t.space), Rat(t.a));
    if (!(c.deviation < t.tol)) {
      why = fail_at(std::string(t.space) + " selfdual a=" + std::to_string(t.a), c.deviation,
                    t.tol);
      return false;
    }
  }
  return true;
}

bool crit_shifts(std::string& why) {
  PsiCharacter psi{Rat(1)};
  struct T {
    const char* space;
    double lam, mu;
    double tol;
  };
  const T translations[] = {
      {"TATE", 0.1, 0.05, 1e-6}, {"TATE", 0.1, 0.0, 1e-12}, {"QF_1_1", 0.1, 0.1, 1e-4}};
  for (const auto& t : translations) {
    GammaCheck c = check_translation(builtin_space(t.space), cplx{t.lam, 0.0},
                                     cplx{t.mu, 0.0}, psi);
    if (!(c.deviation < t.tol)) {
      why = fail_at(std::string(t.space) + " translation mu=" + std::to_string(t.mu),
                    c.deviation, t.tol);
      return false;
    }
  }

  struct H {
    const char* space;
    double lam;
    int M;
    double tol;
  };
  const H shifts[] = {
      {"TATE", 0.1, 1, 1e-6}, {"TATE", 0.1, 0, 1e-12}, {"QF_2_0", 0.3, 1, 1e-4}};
  for (const auto& t : shifts) {
    GammaCheck c = check_hM_shift(builtin_space(t.space), cplx{t.lam, 0.0}, t.M, psi);
    if (!(c.deviation < t.tol)) {
      why = fail_at(std::string(t.space) + " shift M=" + std::to_string(t.M), c.deviation,
                    t.tol);
      return false;
    }
  }
  return true;
}

bool crit_capelli(std::string& why) {
  for (const auto& nm : builtin_names()) {
    const SpaceDesc& d = builtin_space(nm);
    for (int M = 1; M <= 2; ++M) {
      for (int m = -2; m <= 2; ++m) {
        if (!twist_shift_check(d.f.at(0), d.fdual.at(0), M, m)) {
          why = nm + ": twist-shift law fails at M=" + std::to_string(M) +
                ", m=" + std::to_string(m);
          return false;
        }
      }
      PolyS c = capelli_eigenvalue(d.f.at(0), d.fdual.at(0), M);
      if (leading_coeff_at(c, Rat(-2)) == 0) {
        why = nm + ": top coefficient vanishes at M=" + std::to_string(M);
        return false;
      }
    }
  }
  return true;
}

bool crit_strip_probe(std::string& why) {
  QuadConfig cfg;
  cfg.rel_tol = 1e-8;
  for (const char* nm : {"TATE", "QF_2_0"}) {
    const SpaceDesc& d = builtin_space(nm);
    TestFunction xi = TestFunction::gaussian(d.dim);
    EtaVector eta = eta_ones(d.k_orbits());
    double lam_re = lambda_for_s(d, 0.25);
    for (int t = -20; t <= 20; ++t) {
      ZetaValue v = lz(d, eta, xi, cplx{lam_re, static_cast<double>(t)}, cfg);
      if (!std::isfinite(v.value.real()) || !std::isfinite(v.value.imag())) {
        why = std::string(nm) + ": non-finite normalized value at height " + std::to_string(t);
        return false;
      }
      for (const auto& f : v.flags)
        if (f.find("NearPole") != std::string::npos) {
          why = std::string(nm) + ": pole proximity flagged on the scan line at height " +
                std::to_string(t);
          return false;
        }
    }
  }
  return true;
}

bool crit_determinism(std::string& why) {
  QuadConfig cfg;
  VerifyReport r1 = run_verify(builtin_space("TATE"), cfg, 2);
  VerifyReport r2 = run_verify(builtin_space("TATE"), cfg, 2);
  if (r1.artifacts.size() != 3 || r2.artifacts.size() != r1.artifacts.size()) {
    why = "unexpected artifact count";
    return false;
  }
  for (std::size_t i = 0; i < r1.artifacts.size(); ++i) {
    if (r1.artifacts[i].first != r2.artifacts[i].first ||
        r1.artifacts[i].second != r2.artifacts[i].second) {
      why = "artifact " + r1.artifacts[i].first + " differs between runs";
      return false;
    }
    if (r1.artifacts[i].second.empty()) {
      why = "artifact " + r1.artifacts[i].first + " is empty";
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    bool (*run)(std::string&);
  };
  const Criterion criteria[] = {
      {"symbolic-certification", 1.0, crit_symbolic},
      {"dim1-closed-form", 1.0, crit_dim1_closed_form},
      {"continuation-consistency", 120.0, crit_continuation},
      {"pole-residue", 30.0, crit_pole_residue},
      {"functional-equation", 60.0, crit_functional_equation},
      {"gamma-identities", 300.0, crit_gamma_identities},
      {"translation-and-shift", 300.0, crit_shifts},
      {"capelli-laws", 5.0, crit_capelli},
      {"strip-boundedness", 60.0, crit_strip_probe},
      {"determinism", 0.0, crit_determinism},
  };

  bool all = true;
  for (const auto& c : criteria) {
    std::string why;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = c.budget_s <= 0 || secs < c.budget_s;
    if (ok && !in_budget) why = "runtime budget exceeded";
    bool pass = ok && in_budget;
    std::printf("%s %-26s (%.2f s)%s%s\n", pass ? "PASS" : "FAIL", c.name, secs,
                why.empty() ? "" : " ", why.c_str());
    all = all && pass;
  }
  std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILURES present");
  return all ? 0 : 1;
}
