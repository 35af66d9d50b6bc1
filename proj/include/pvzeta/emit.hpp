#pragma once

// Deterministic text emitters: CSV for grid scans, JSON for matrices
// and reports. Numbers are printed with %.17g so round-trips are exact
// and output is byte-stable for identical inputs.

#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"
#include "pvzeta/gamma_matrix.hpp"
#include "pvzeta/space.hpp"
#include "pvzeta/zeta.hpp"

namespace pvz {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline Json cplx_json(cplx z) { return Json::array({z.real(), z.imag()}); }

// One scan row: the evaluation point plus the engine result.
struct ZetaRow {
  cplx lambda;
  ZetaValue z;
  std::vector<std::string> extra_flags;  // grid-level annotations
};

inline std::string flags_cell(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  std::string s;
  for (const auto& f : a) s += (s.empty() ? "" : ";") + f;
  for (const auto& f : b) s += (s.empty() ? "" : ";") + f;
  return s;
}

inline std::string zeta_csv(const SpaceDesc& d, const std::vector<ZetaRow>& rows) {
  std::string out = "lambda_re,lambda_im";
  for (int i = 0; i < d.k_orbits(); ++i) {
    out += ",orbit" + std::to_string(i) + "_re";
    out += ",orbit" + std::to_string(i) + "_im";
  }
  out += ",total_re,total_im,abs_err,M_used,flags\n";
  for (const auto& r : rows) {
    out += fmt17(r.lambda.real()) + "," + fmt17(r.lambda.imag());
    for (int i = 0; i < d.k_orbits(); ++i) {
      cplx zi = i < static_cast<int>(r.z.orbit_breakdown.size()) ? r.z.orbit_breakdown[i]
                                                                 : cplx{0.0, 0.0};
      out += "," + fmt17(zi.real()) + "," + fmt17(zi.imag());
    }
    out += "," + fmt17(r.z.value.real()) + "," + fmt17(r.z.value.imag());
    out += "," + fmt17(r.z.abs_error_estimate);
    out += "," + std::to_string(r.z.M_used);
    out += "," + flags_cell(r.z.flags, r.extra_flags) + "\n";
  }
  return out;
}

inline Json gamma_to_json(const SpaceDesc& d, const GammaMatrix& g) {
  Json j;
  j["schema_version"] = 1;
  j["space"] = d.name;
  j["lambda"] = cplx_json(g.lambda);
  j["psi_a"] = rat_str(g.psi_a);
  Json rows = Json::array();
  for (const auto& row : g.entries) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(cplx_json(x));
    rows.push_back(std::move(r));
  }
  j["entries"] = rows;
  j["lsq_residual"] = g.lsq_residual;
  j["condition_number"] = g.condition_number;
  j["selfdual_rescale"] = g.selfdual_rescale;
  j["flags"] = g.flags;
  return j;
}

inline Json polys_to_json(const PolyS& p) {
  Json c = Json::array();
  for (int k = 0; k <= p.degree(); ++k) c.push_back(rat_str(p.coeff(k)));
  return c;
}

inline Json bfun_to_json(const SpaceDesc& d) {
  Json j;
  j["schema_version"] = 1;
  j["space"] = d.name;
  j["bfun_coeffs"] = polys_to_json(d.bfun.at(0));
  Json roots = Json::array();
  for (const auto& r : rational_roots(d.bfun.at(0))) roots.push_back(rat_str(r));
  j["roots"] = roots;
  return j;
}

inline Json capelli_to_json(const SpaceDesc& d, int M) {
  Json j;
  j["schema_version"] = 1;
  j["space"] = d.name;
  j["M"] = M;
  j["eigenvalue_coeffs"] = polys_to_json(capelli_eigenvalue(d.f.at(0), d.fdual.at(0), M));
  return j;
}

// Pole candidates of the continued zeta: zeros of the Gamma-factor
// arguments alpha_j(lambda) = slope*lambda + intercept at nonpositive
// integers, listed per factor to the requested depth.
inline Json poles_to_json(const SpaceDesc& d, int depth) {
  Json j;
  j["schema_version"] = 1;
  j["space"] = d.name;
  Json factors = Json::array();
  auto gs = gamma_factors(d);
  for (const auto& g : gs) {
    Json f;
    f["slope"] = g.slope;
    f["intercept"] = rat_str(g.intercept);
    Json ls = Json::array();
    for (int m = 0; m < depth; ++m) {
      Rat lam = (Rat(-m) - g.intercept) / Rat(g.slope);
      ls.push_back(Json::array({rat_str(lam), rat_d(lam)}));
    }
    f["lambda_poles"] = ls;
    factors.push_back(std::move(f));
  }
  j["factors"] = factors;
  return j;
}

inline std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace pvz
