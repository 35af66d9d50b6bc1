#pragma once

// Command-line front end: parse-validate-execute. Exit codes: 0 on
// success, 1 on verification failure or runtime breakdown, 2 on usage
// errors. All numeric output is deterministic for fixed flags and
// thread count.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pvzeta/verify.hpp"

namespace pvz {
namespace cli {

inline int thread_count(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("PVZETA_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

inline cplx parse_cplx(const std::string& s) {
  std::size_t comma = s.find(',');
  try {
    if (comma == std::string::npos) return cplx{std::stod(s), 0.0};
    return cplx{std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError("cannot parse complex number: " + s);
  }
}

// Either a single point "re[,im]" or a real sweep "from:to:count[,im]".
inline std::vector<cplx> parse_grid(const std::string& s) {
  std::size_t comma = s.find(',');
  std::string re = comma == std::string::npos ? s : s.substr(0, comma);
  double im = comma == std::string::npos ? 0.0 : parse_cplx("0" + s.substr(comma)).imag();
  std::size_t c1 = re.find(':');
  if (c1 == std::string::npos) return {cplx{parse_cplx(re).real(), im}};
  std::size_t c2 = re.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("grid must be from:to:count[,im]: " + s);
  try {
    double from = std::stod(re.substr(0, c1));
    double to = std::stod(re.substr(c1 + 1, c2 - c1 - 1));
    int count = std::stoi(re.substr(c2 + 1));
    if (count < 1 || count > 100000) throw UsageError("grid count out of range: " + s);
    return detail::linspace(cplx{from, im}, cplx{to, im}, count);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("cannot parse grid: " + s);
  }
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(',', pos);
    std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (tok.empty()) throw UsageError("empty entry in list: " + s);
    out.push_back(tok);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

inline std::vector<Rat> parse_rats(const std::string& s) {
  std::vector<Rat> out;
  for (const auto& tok : split_list(s)) {
    try {
      out.push_back(rat_parse(tok));
    } catch (const std::exception&) {
      throw UsageError("cannot parse rational coefficient: " + tok);
    }
  }
  return out;
}

inline std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split_list(s)) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw UsageError("cannot parse coefficient: " + tok);
    }
  }
  return out;
}

// Linear combination of the leading Hermite-Gaussian basis functions,
// with exact rational coefficients.
inline TestFunction xi_from_coeffs(int dim, const std::vector<Rat>& coeffs) {
  if (coeffs.empty()) throw UsageError("xi coefficient list is empty");
  int deg = detail::hermite_degree_for(dim, static_cast<int>(coeffs.size()));
  auto basis = hermite_basis(dim, deg);
  if (coeffs.size() > basis.size()) throw UsageError("too many xi coefficients");
  TestFunction acc = basis[0].with_poly(CPoly(dim));
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    acc = acc + basis[i].scaled(PiLaurent(coeffs[i]));
  }
  return acc;
}

inline void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file: " + path);
  f << content;
}

inline const SpaceDesc& space_arg(const std::string& name) { return builtin_space(name); }

inline int run(int argc, const char* const* argv) {
  CLI::App app{"rank-1 sign-chamber zeta integrals, continuation, and transfer matrices"};
  app.require_subcommand(1);

  std::string space, lambda_s, grid_s, eta_s, xi_s, psi_s = "1", out, out_dir;
  int basis = 8, force_M = -1, threads_flag = 0, capelli_M = 1, pole_depth = 4;
  double rel_tol = 1e-9;
  bool as_json = false, with_duals = false;

  CLI::App* c_spaces = app.add_subcommand("spaces", "list built-in space descriptors");
  c_spaces->add_flag("--json", as_json, "emit the full descriptors as JSON");
  c_spaces->add_flag("--duals", with_duals, "include the dual descriptors");
  c_spaces->add_option("--out", out, "output path (default stdout)");

  CLI::App* c_zeta = app.add_subcommand("zeta", "evaluate zeta integrals on a lambda grid");
  c_zeta->add_option("space", space, "space name")->required();
  c_zeta->add_option("--lambda", lambda_s, "single evaluation point re[,im]");
  c_zeta->add_option("--lambda-grid", grid_s, "sweep from:to:count[,im]");
  c_zeta->add_option("--eta", eta_s, "orbit weights (comma list, default all ones)");
  c_zeta->add_option("--xi", xi_s, "test-function coefficients over the Hermite-Gaussian basis");
  c_zeta->add_option("--force-M", force_M, "fixed descent depth (default automatic)");
  c_zeta->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
  c_zeta->add_option("--threads", threads_flag, "worker threads (default PVZETA_THREADS or 1)");
  c_zeta->add_option("--out", out, "output CSV path (default stdout)");

  CLI::App* c_gamma = app.add_subcommand("gamma", "extract the transfer matrix at one point");
  c_gamma->add_option("space", space, "space name")->required();
  c_gamma->add_option("--lambda", lambda_s, "evaluation point re[,im]")->required();
  c_gamma->add_option("--psi", psi_s, "additive character parameter (rational)");
  c_gamma->add_option("--basis", basis, "test-function count (>= twice the orbit count)");
  c_gamma->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
  c_gamma->add_option("--out", out, "output JSON path (default stdout)");

  CLI::App* c_bfun = app.add_subcommand("bfun", "print the certified Bernstein-Sato data");
  c_bfun->add_option("space", space, "space name")->required();
  c_bfun->add_option("--out", out, "output JSON path (default stdout)");

  CLI::App* c_cap = app.add_subcommand("capelli", "print the Capelli eigenvalue polynomial");
  c_cap->add_option("space", space, "space name")->required();
  c_cap->add_option("--M", capelli_M, "operator order parameter")->check(CLI::Range(0, 6));
  c_cap->add_option("--out", out, "output JSON path (default stdout)");

  CLI::App* c_poles = app.add_subcommand("poles", "list pole candidates of the continued zeta");
  c_poles->add_option("space", space, "space name")->required();
  c_poles->add_option("--depth", pole_depth, "candidates per factor")->check(CLI::Range(1, 64));
  c_poles->add_option("--out", out, "output JSON path (default stdout)");

  CLI::App* c_verify = app.add_subcommand("verify", "run the named check suite");
  c_verify->add_option("space", space, "space name or 'all'")->required();
  c_verify->add_option("--out-dir", out_dir, "directory for deterministic artifacts");
  c_verify->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
  c_verify->add_option("--threads", threads_flag, "worker threads (default PVZETA_THREADS or 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  QuadConfig cfg;
  cfg.rel_tol = rel_tol;

  try {
    if (c_spaces->parsed()) {
      std::vector<std::string> names = builtin_names();
      if (with_duals)
        for (const auto& nm : builtin_names()) names.push_back(nm + "_DUAL");
      std::string text;
      if (as_json) {
        Json j = Json::array();
        for (const auto& nm : names) j.push_back(space_to_json(builtin_space(nm)));
        text = json_text(j);
      } else {
        text = "name dim orbits deg_f b(s)\n";
        for (const auto& nm : names) {
          const SpaceDesc& d = builtin_space(nm);
          text += d.name + " " + std::to_string(d.dim) + " " + std::to_string(d.k_orbits()) +
                  " " + std::to_string(d.deg_f()) + " " + d.bfun[0].str() + "\n";
        }
      }
      emit(out, text);
      return 0;
    }

    if (c_zeta->parsed()) {
      const SpaceDesc& d = space_arg(space);
      if (lambda_s.empty() == grid_s.empty())
        throw UsageError("exactly one of --lambda and --lambda-grid is required");
      std::vector<cplx> grid =
          grid_s.empty() ? std::vector<cplx>{parse_cplx(lambda_s)} : parse_grid(grid_s);
      EtaVector eta = eta_ones(d.k_orbits());
      if (!eta_s.empty()) {
        auto v = parse_reals(eta_s);
        if (static_cast<int>(v.size()) != d.k_orbits())
          throw UsageError("eta length does not match the orbit count");
        eta.c.assign(v.begin(), v.end());
      }
      TestFunction xi = xi_s.empty() ? TestFunction::gaussian(d.dim)
                                     : xi_from_coeffs(d.dim, parse_rats(xi_s));
      QuadConfig gcfg = cfg;
      if (force_M >= 0) {
        // A fixed descent depth must be applied per row.
        std::vector<ZetaRow> rows;
        for (const auto& l : grid)
          rows.push_back({l, z_continued(d, eta, xi, l, gcfg, force_M), {}});
        emit(out, zeta_csv(d, rows));
        return 0;
      }
      auto rows = detail::zeta_grid(d, eta, xi, grid, gcfg, thread_count(threads_flag));
      emit(out, zeta_csv(d, rows));
      return 0;
    }

    if (c_gamma->parsed()) {
      const SpaceDesc& d = space_arg(space);
      GammaMatrix g = extract_gamma(d, parse_cplx(lambda_s), PsiCharacter{rat_parse(psi_s)},
                                    basis, cfg);
      emit(out, json_text(gamma_to_json(d, g)));
      return 0;
    }

    if (c_bfun->parsed()) {
      emit(out, json_text(bfun_to_json(space_arg(space))));
      return 0;
    }
    if (c_cap->parsed()) {
      emit(out, json_text(capelli_to_json(space_arg(space), capelli_M)));
      return 0;
    }
    if (c_poles->parsed()) {
      emit(out, json_text(poles_to_json(space_arg(space), pole_depth)));
      return 0;
    }

    if (c_verify->parsed()) {
      std::vector<std::string> targets;
      if (space == "all")
        targets = builtin_names();
      else
        targets.push_back(space_arg(space).name);
      bool all_ok = true;
      for (const auto& nm : targets) {
        VerifyReport rep = run_verify(builtin_space(nm), cfg, thread_count(threads_flag));
        for (const auto& c : rep.checks) {
          std::cout << (c.pass ? "PASS " : "FAIL ") << rep.space << "." << c.id;
          if (c.tol > 0)
            std::cout << " (deviation " << fmt17(c.value) << ", tolerance " << fmt17(c.tol)
                      << ")";
          std::cout << ": " << c.detail << "\n";
        }
        if (!out_dir.empty()) {
          std::filesystem::create_directories(out_dir);
          for (const auto& [fname, content] : rep.artifacts)
            emit((std::filesystem::path(out_dir) / fname).string(), content);
        }
        all_ok = all_ok && rep.all_pass();
      }
      std::cout << (all_ok ? "all checks passed" : "some checks FAILED") << "\n";
      return all_ok ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NotFoundError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const OutOfRangeError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace cli
}  // namespace pvz
