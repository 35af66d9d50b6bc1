#pragma once

// Descriptors for the built-in regular sign-chamber families, their
// duals, exact validation, and JSON (de)serialization.

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pvzeta/errors.hpp"
#include "pvzeta/poly.hpp"
#include "pvzeta/s_poly.hpp"
#include "pvzeta/weyl.hpp"

namespace pvz {

enum class ChartKind { HalfLine, SphereShell, HyperboloidShell };

inline std::string chart_kind_str(ChartKind k) {
  switch (k) {
    case ChartKind::HalfLine: return "HALF_LINE";
    case ChartKind::SphereShell: return "SPHERE_SHELL";
    case ChartKind::HyperboloidShell: return "HYPERBOLOID_SHELL";
  }
  return "?";
}

inline ChartKind chart_kind_parse(const std::string& s) {
  if (s == "HALF_LINE") return ChartKind::HalfLine;
  if (s == "SPHERE_SHELL") return ChartKind::SphereShell;
  if (s == "HYPERBOLOID_SHELL") return ChartKind::HyperboloidShell;
  throw UsageError("unknown chart kind: " + s);
}

struct OrbitChart {
  std::vector<int> sign;    // sign of each basic invariant on the orbit
  std::vector<Rat> sample;  // rational point inside the orbit
  ChartKind kind = ChartKind::HalfLine;
  int p = 0, q = 0;         // shell signature (q = 0 for compact shells)
  double theta0 = 6.0;      // initial hyperbolic-angle cutoff, auto-widened
};

struct SpaceDesc {
  std::string name;
  int dim = 0;
  int rank = 1;
  std::vector<QPoly> f;
  std::vector<QPoly> fdual;
  std::vector<std::pair<int, int>> degrees;  // (deg f_i, deg fdual_i)
  std::vector<OrbitChart> orbits;
  std::vector<Rat> lambda0;      // shared-coordinate normalization exponent
  std::vector<Rat> measure_exp;  // own-side invariant-measure exponent
  int orientation = 1;           // +1 own side is X, -1 own side is the dual
  std::vector<PolyS> bfun;
  std::vector<Rat> kappa;        // convergence edge: orientation*Re(lambda) > kappa
  std::vector<int> d_coeffs;     // deg fdual_i

  int k_orbits() const { return static_cast<int>(orbits.size()); }
  Rat lambda0_own() const { return Rat(orientation) * lambda0.at(0); }
  int deg_f() const { return degrees.at(0).first; }
  int deg_fdual() const { return degrees.at(0).second; }

  void require_rank1() const {
    if (rank != 1 || f.size() != 1 || fdual.size() != 1)
      throw UnsupportedRankError("only rank-1 descriptors are supported: " + name);
  }
};

namespace detail {

inline QPoly quadratic_form(int n, int p) {
  QPoly q(n);
  for (int i = 0; i < n; ++i) {
    Expo e(n, 0);
    e[i] = 2;
    q.add_term(e, Rat(i < p ? 1 : -1));
  }
  return q;
}

inline int sgn_rat(const Rat& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

}  // namespace detail

// ---- validation -----------------------------------------------------

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Chart point for numeric spot checks and quadrature cross-checks.
// Coordinates: t > 0 fiber value, theta hyperbolic or polar angle,
// phi azimuth, sheet in {+1,-1}.
inline std::vector<double> chart_point(const SpaceDesc& d, const OrbitChart& oc, double t,
                                       double theta, double phi, int sheet) {
  double rt = std::sqrt(t);
  switch (oc.kind) {
    case ChartKind::HalfLine:
      return {static_cast<double>(oc.sign.at(0)) * t};
    case ChartKind::SphereShell:
      if (d.dim == 2) return {rt * std::cos(theta), rt * std::sin(theta)};
      return {rt * std::sin(theta) * std::cos(phi), rt * std::sin(theta) * std::sin(phi),
              rt * std::cos(theta)};
    case ChartKind::HyperboloidShell:
      if (d.dim == 2) {
        if (oc.sign.at(0) > 0)
          return {sheet * rt * std::cosh(theta), sheet * rt * std::sinh(theta)};
        return {rt * std::sinh(theta), sheet * rt * std::cosh(theta)};
      }
      if (oc.sign.at(0) > 0)
        return {rt * std::cosh(theta) * std::cos(phi), rt * std::cosh(theta) * std::sin(phi),
                rt * std::sinh(theta)};
      return {rt * std::sinh(theta) * std::cos(phi), rt * std::sinh(theta) * std::sin(phi),
              sheet * rt * std::cosh(theta)};
  }
  throw Error("chart_point: unreachable");
}

// Least radial exponent with every orbit integral convergent at the
// small-|f| end (exclusive). Hyperbolic shells diverge like
// t^{1-(p+q)/2} as t -> 0, so they raise the edge above zero.
inline Rat chart_convergence_edge(const SpaceDesc& d) {
  Rat edge(0);
  for (const auto& oc : d.orbits)
    if (oc.kind == ChartKind::HyperboloidShell) {
      Rat e = rat(oc.p + oc.q, 2) - 1;
      if (e > edge) edge = e;
    }
  return edge;
}

// Rational gradient map x -> grad f(x) / f(x); identifies orbits with
// dual orbits and is an exact involution on the built-in family.
inline std::vector<Rat> identification_map(const QPoly& f, const std::vector<Rat>& x) {
  Rat fx = f.eval_rat(x);
  if (fx == 0) throw Error("identification_map: sample on the singular set");
  std::vector<Rat> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = f.derivative(static_cast<int>(j)).eval_rat(x) / fx;
  return out;
}

inline ValidationReport validate(const SpaceDesc& d) {
  ValidationReport rep;
  auto add = [&rep](const std::string& name, bool pass, const std::string& detail = "") {
    rep.checks.push_back({name, pass, detail});
  };

  d.require_rank1();
  const QPoly& f = d.f[0];
  const QPoly& fd = d.fdual[0];

  bool hom = f.is_homogeneous() && fd.is_homogeneous() && f.degree() == d.degrees[0].first &&
             fd.degree() == d.degrees[0].second && d.d_coeffs[0] == fd.degree();
  add("invariant_homogeneous", hom,
      "deg f = " + std::to_string(f.degree()) + ", deg fdual = " + std::to_string(fd.degree()));

  bool samples_ok = !d.orbits.empty();
  for (const auto& oc : d.orbits) {
    Rat v = f.eval_rat(oc.sample);
    if (detail::sgn_rat(v) != oc.sign.at(0)) samples_ok = false;
  }
  add("orbit_samples", samples_ok, "sign of f at each sample matches the chamber");

  bool bded = false;
  std::string bdetail;
  try {
    PolyS b = b_function(f, fd);
    bded = (b == d.bfun[0]);
    bdetail = "b(sigma) = " + b.str("sigma");
  } catch (const NotEigenError& e) {
    bdetail = e.what();
  }
  add("bfun_certified", bded, bdetail);

  add("bfun_degree", d.bfun[0].degree() == fd.degree(),
      "deg b = " + std::to_string(d.bfun[0].degree()));

  Rat l0 = d.lambda0_own();
  Rat four_l0 = l0 * 4;
  bool lattice = rat_is_int(four_l0) && four_l0 >= 0 &&
                 four_l0 * d.degrees[0].first == Rat(2 * d.dim);
  add("lambda0_lattice", lattice, "4*lambda0_own*deg f = 2*dim");

  add("measure_exponent", d.measure_exp[0] == l0 * 2, "sigma_mu = 2*lambda0_own");

  add("kappa_edge", d.kappa[0] == chart_convergence_edge(d) - l0,
      "kappa = chart convergence edge - lambda0_own");

  add("orientation_unit", d.orientation == 1 || d.orientation == -1, "");

  // Scaling covariance of the gradient identification: the image of a
  // dilated sample transforms with the homogeneity degree of fdual.
  bool covar = true;
  std::string cdetail;
  try {
    for (const auto& oc : d.orbits) {
      std::vector<Rat> img = identification_map(f, oc.sample);
      Rat base = fd.eval_rat(img);
      if (base == 0) covar = false;
      for (long c : {2L, 3L}) {
        std::vector<Rat> scaled = oc.sample;
        for (auto& v : scaled) v *= c;
        std::vector<Rat> img_c = identification_map(f, scaled);
        if (fd.eval_rat(img_c) * rat_pow(Rat(c), fd.degree()) != base) covar = false;
      }
    }
    cdetail = "fdual(iota(c x)) c^{deg fdual} = fdual(iota(x)) at c = 2, 3";
  } catch (const Error& e) {
    covar = false;
    cdetail = e.what();
  }
  add("identification_covariance", covar, cdetail);

  // |f| equals the fiber coordinate t on each chart, numerically.
  bool fiber_ok = true;
  for (const auto& oc : d.orbits) {
    for (double t : {0.35, 1.0, 2.7}) {
      for (double th : {0.0, 0.6, 1.4}) {
        for (double ph : {0.0, 1.1}) {
          for (int sheet : {1, -1}) {
            auto x = chart_point(d, oc, t, th, ph, sheet);
            double ft = f.eval_d(x);
            if (std::abs(std::abs(ft) - t) > 1e-12 * std::max(1.0, t)) fiber_ok = false;
            if (ft * oc.sign.at(0) <= 0) fiber_ok = false;
          }
        }
      }
    }
  }
  add("chart_fiber", fiber_ok, "|f(chart(t, .))| = t and sign matches");

  return rep;
}

// ---- duals and registry ---------------------------------------------

inline SpaceDesc dual(const SpaceDesc& d) {
  d.require_rank1();
  SpaceDesc r;
  const std::string suffix = "_DUAL";
  if (d.name.size() > suffix.size() &&
      d.name.compare(d.name.size() - suffix.size(), suffix.size(), suffix) == 0)
    r.name = d.name.substr(0, d.name.size() - suffix.size());
  else
    r.name = d.name + suffix;
  r.dim = d.dim;
  r.rank = d.rank;
  r.f = d.fdual;
  r.fdual = d.f;
  r.degrees = {{d.degrees[0].second, d.degrees[0].first}};
  r.lambda0 = {-d.lambda0[0]};
  r.measure_exp = d.measure_exp;  // own-side value is orientation independent
  r.orientation = -d.orientation;
  r.bfun = {b_function(r.f[0], r.fdual[0])};
  r.d_coeffs = {d.degrees[0].first};
  for (const auto& oc : d.orbits) {
    OrbitChart noc = oc;
    noc.sample = identification_map(d.f[0], oc.sample);
    noc.sign = {detail::sgn_rat(r.f[0].eval_rat(noc.sample))};
    r.orbits.push_back(std::move(noc));
  }
  r.kappa = {chart_convergence_edge(r) - r.lambda0_own()};
  return r;
}

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"TATE", "QF_2_0", "QF_1_1", "QF_3_0",
                                                 "QF_2_1"};
  return names;
}

inline SpaceDesc make_builtin(const std::string& name) {
  SpaceDesc d;
  d.name = name;
  d.rank = 1;
  d.orientation = 1;
  if (name == "TATE") {
    d.dim = 1;
    d.f = {QPoly::var(1, 0)};
    d.fdual = {QPoly::var(1, 0)};
    d.degrees = {{1, 1}};
    d.lambda0 = {rat(1, 2)};
    d.measure_exp = {Rat(1)};
    d.d_coeffs = {1};
    OrbitChart plus{{1}, {Rat(1)}, ChartKind::HalfLine, 1, 0, 0.0};
    OrbitChart minus{{-1}, {Rat(-1)}, ChartKind::HalfLine, 1, 0, 0.0};
    d.orbits = {plus, minus};
  } else if (name == "QF_2_0" || name == "QF_1_1" || name == "QF_3_0" || name == "QF_2_1") {
    int n = (name[3] - '0') + (name[5] - '0');
    int p = name[3] - '0';
    d.dim = n;
    d.f = {detail::quadratic_form(n, p)};
    d.fdual = {detail::quadratic_form(n, p)};
    d.degrees = {{2, 2}};
    d.lambda0 = {rat(n, 4)};
    d.measure_exp = {rat(n, 2)};
    d.d_coeffs = {2};
    bool definite = (p == n);
    if (definite) {
      std::vector<Rat> s0(n, Rat(0));
      s0[0] = 1;
      d.orbits = {{{1}, s0, ChartKind::SphereShell, n, 0, 0.0}};
    } else {
      std::vector<Rat> splus(n, Rat(0)), sminus(n, Rat(0));
      splus[0] = 1;
      sminus[n - 1] = 1;
      d.orbits = {{{1}, splus, ChartKind::HyperboloidShell, p, n - p, 6.0},
                  {{-1}, sminus, ChartKind::HyperboloidShell, p, n - p, 6.0}};
    }
  } else {
    throw NotFoundError("unknown space: " + name);
  }
  PolyS sig = PolyS::var();
  if (d.dim == 1) {
    d.bfun = {PolyS::affine(Rat(1), Rat(1))};
  } else {
    PolyS b = (sig + PolyS(Rat(1))) * (sig + PolyS(rat(d.dim, 2))) * Rat(4);
    d.bfun = {b};
  }
  d.kappa = {chart_convergence_edge(d) - d.lambda0_own()};
  return d;
}

inline const SpaceDesc& builtin_space(const std::string& name) {
  static const std::map<std::string, SpaceDesc> cache = [] {
    std::map<std::string, SpaceDesc> m;
    for (const auto& nm : builtin_names()) {
      SpaceDesc d = make_builtin(nm);
      if (!validate(d).all_pass()) throw Error("builtin descriptor failed validation: " + nm);
      SpaceDesc dd = dual(d);
      if (!validate(dd).all_pass())
        throw Error("builtin dual descriptor failed validation: " + nm);
      m.emplace(dd.name, std::move(dd));
      m.emplace(nm, std::move(d));
    }
    return m;
  }();
  auto it = cache.find(name);
  if (it == cache.end()) throw NotFoundError("unknown space: " + name);
  return it->second;
}

// ---- JSON ------------------------------------------------------------

using Json = nlohmann::ordered_json;

inline Json qpoly_to_json(const QPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.t) {
    Json t = Json::array();
    t.push_back(e);
    t.push_back(c.get_num().get_str());
    t.push_back(c.get_den().get_str());
    terms.push_back(std::move(t));
  }
  return terms;
}

inline QPoly qpoly_from_json(const Json& j, int n) {
  QPoly p(n);
  for (const auto& t : j) {
    Expo e = t.at(0).get<Expo>();
    if (static_cast<int>(e.size()) != n) throw UsageError("polynomial term arity mismatch");
    Rat num(t.at(1).get<std::string>(), 10);
    Rat den(t.at(2).get<std::string>(), 10);
    if (den == 0) throw UsageError("zero denominator in polynomial");
    Rat c = num / den;
    c.canonicalize();
    p.add_term(e, c);
  }
  return p;
}

inline Json space_to_json(const SpaceDesc& d) {
  Json j;
  j["schema_version"] = 1;
  j["name"] = d.name;
  j["dim"] = d.dim;
  j["rank"] = d.rank;
  j["basic_invariants"] = Json::array({qpoly_to_json(d.f[0])});
  j["dual_basic_invariants"] = Json::array({qpoly_to_json(d.fdual[0])});
  j["degrees"] = Json::array({Json::array({d.degrees[0].first, d.degrees[0].second})});
  Json orbits = Json::array();
  for (const auto& oc : d.orbits) {
    Json o;
    o["sign_vector"] = oc.sign;
    Json sample = Json::array();
    for (const auto& v : oc.sample) sample.push_back(rat_str(v));
    o["sample_point"] = sample;
    o["chart"] = Json{{"kind", chart_kind_str(oc.kind)}, {"p", oc.p}, {"q", oc.q}};
    o["truncation"] = oc.theta0;
    orbits.push_back(std::move(o));
  }
  j["orbits"] = orbits;
  j["lambda0"] = Json::array({rat_str(d.lambda0[0])});
  j["measure_exponent"] = Json::array({rat_str(d.measure_exp[0])});
  j["lambda_orientation"] = d.orientation;
  Json bc = Json::array();
  for (int k = 0; k <= d.bfun[0].degree(); ++k) bc.push_back(rat_str(d.bfun[0].coeff(k)));
  j["bfun"] = Json::array({bc});
  j["kappa"] = Json::array({rat_str(d.kappa[0])});
  j["d_coeffs"] = d.d_coeffs;
  return j;
}

inline SpaceDesc space_from_json(const Json& j) {
  SpaceDesc d;
  d.name = j.at("name").get<std::string>();
  d.dim = j.at("dim").get<int>();
  d.rank = j.at("rank").get<int>();
  if (d.rank != 1) throw UnsupportedRankError("only rank-1 descriptors are supported");
  d.f = {qpoly_from_json(j.at("basic_invariants").at(0), d.dim)};
  d.fdual = {qpoly_from_json(j.at("dual_basic_invariants").at(0), d.dim)};
  d.degrees = {{j.at("degrees").at(0).at(0).get<int>(), j.at("degrees").at(0).at(1).get<int>()}};
  for (const auto& o : j.at("orbits")) {
    OrbitChart oc;
    oc.sign = o.at("sign_vector").get<std::vector<int>>();
    for (const auto& v : o.at("sample_point")) oc.sample.push_back(rat_parse(v.get<std::string>()));
    oc.kind = chart_kind_parse(o.at("chart").at("kind").get<std::string>());
    oc.p = o.at("chart").at("p").get<int>();
    oc.q = o.at("chart").at("q").get<int>();
    oc.theta0 = o.at("truncation").get<double>();
    d.orbits.push_back(std::move(oc));
  }
  d.lambda0 = {rat_parse(j.at("lambda0").at(0).get<std::string>())};
  d.measure_exp = {rat_parse(j.at("measure_exponent").at(0).get<std::string>())};
  d.orientation = j.at("lambda_orientation").get<int>();
  PolyS b;
  for (const auto& c : j.at("bfun").at(0)) b.a.push_back(rat_parse(c.get<std::string>()));
  b.trim();
  d.bfun = {b};
  d.kappa = {rat_parse(j.at("kappa").at(0).get<std::string>())};
  d.d_coeffs = j.at("d_coeffs").get<std::vector<int>>();
  d.require_rank1();
  return d;
}

}  // namespace pvz
