#pragma once

// Transfer matrix of the functional equation on the orbit-indicator
// basis. For a rank-1 descriptor with k open-orbit components, the
// matrix gamma(lambda, psi) is defined columnwise by
//
//   Z_dual(eta_j, F_psi xi) = sum_i gamma[i][j] Z(eta_i, xi)
//
// for every test function xi, where eta_j runs over the dual-side
// indicators and eta_i over the primal ones. Both sides are evaluated
// through the continued zeta, so the extraction works at any lambda off
// the pole set, and the matrix is recovered by least squares over a
// redundant basis of Hermite-Gaussian test functions.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pvzeta/errors.hpp"
#include "pvzeta/space.hpp"
#include "pvzeta/testfun.hpp"
#include "pvzeta/zeta.hpp"

namespace pvz {

struct GammaMatrix {
  // entries[i][j]: component along primal indicator i of the image of
  // dual indicator j. Acting on coefficient vectors: out = entries * c.
  std::vector<std::vector<cplx>> entries;
  cplx lambda{0.0, 0.0};
  Rat psi_a{1};
  double lsq_residual = 0;      // Frobenius residual relative to the data norm
  double condition_number = 0;  // spectral condition of the design matrix
  double selfdual_rescale = 1;  // A(psi)^{-1/2}; the unitary-normalized matrix
  std::vector<std::string> flags;

  int k() const { return static_cast<int>(entries.size()); }

  std::vector<cplx> apply(const std::vector<cplx>& c) const {
    std::vector<cplx> out(entries.size(), cplx{0.0, 0.0});
    for (size_t i = 0; i < entries.size(); ++i)
      for (size_t j = 0; j < entries[i].size(); ++j) out[i] += entries[i][j] * c[j];
    return out;
  }
};

// Outcome of a functional-equation identity check. The deviation is the
// largest entrywise mismatch relative to the largest reference entry;
// pass/fail thresholds belong to the caller.
struct GammaCheck {
  std::string name;
  double deviation = 0;
  std::vector<std::string> flags;
  std::vector<std::string> notes;
};

namespace detail {

inline void merge_flags(std::vector<std::string>& dst, const std::vector<std::string>& src) {
  for (const auto& f : src)
    if (std::find(dst.begin(), dst.end(), f) == dst.end()) dst.push_back(f);
}

// Smallest degree whose Hermite-Gaussian family has at least m members.
inline int hermite_degree_for(int n, int m) {
  int deg = 0;
  auto count = [&](int d) {
    long c = 1;
    for (int i = 1; i <= n; ++i) c = c * (d + i) / i;
    return c;
  };
  while (count(deg) < m) ++deg;
  return deg;
}

// Eigenvalues of the 2x2 hermitian positive semidefinite matrix AhA.
inline std::pair<double, double> herm2_eigs(double a, cplx b, double c) {
  double tr = a + c;
  double disc = std::sqrt((a - c) * (a - c) + 4.0 * std::norm(b));
  return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

// Least squares min ||A x - b|| for a tall complex matrix with one or
// two columns, via Gram-Schmidt QR with one reorthogonalization pass.
// Returns the solution columns; fills cond with sigma_max / sigma_min.
inline std::vector<std::vector<cplx>> lsq_solve(const std::vector<std::vector<cplx>>& A,
                                                const std::vector<std::vector<cplx>>& B,
                                                double* cond) {
  const int m = static_cast<int>(A.size());
  const int k = m ? static_cast<int>(A[0].size()) : 0;
  if (k < 1 || k > 2) throw UsageError("lsq_solve supports one or two columns");

  // Condition number from the closed-form spectrum of A^H A.
  double g00 = 0, g11 = 0;
  cplx g01{0.0, 0.0};
  for (int r = 0; r < m; ++r) {
    g00 += std::norm(A[r][0]);
    if (k == 2) {
      g11 += std::norm(A[r][1]);
      g01 += std::conj(A[r][0]) * A[r][1];
    }
  }
  if (k == 1) {
    *cond = g00 > 0 ? 1.0 : std::numeric_limits<double>::infinity();
  } else {
    auto [lo_hi, lo_lo] = herm2_eigs(g00, g01, g11);
    *cond = lo_lo > 0 ? std::sqrt(lo_hi / lo_lo) : std::numeric_limits<double>::infinity();
  }

  // Orthonormal columns q0, q1 and the triangular factor.
  auto nrm = [&](const std::vector<cplx>& v) {
    double s = 0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
  };
  auto dot = [&](const std::vector<cplx>& u, const std::vector<cplx>& v) {
    cplx s{0.0, 0.0};
    for (size_t r = 0; r < u.size(); ++r) s += std::conj(u[r]) * v[r];
    return s;
  };
  std::vector<cplx> q0(m), q1;
  double r00, r11 = 0;
  cplx r01{0.0, 0.0};
  for (int r = 0; r < m; ++r) q0[r] = A[r][0];
  r00 = nrm(q0);
  if (r00 == 0) throw IllConditionedError("zero design column in gamma extraction");
  for (auto& x : q0) x /= r00;
  if (k == 2) {
    q1.resize(m);
    for (int r = 0; r < m; ++r) q1[r] = A[r][1];
    r01 = dot(q0, q1);
    for (int r = 0; r < m; ++r) q1[r] -= r01 * q0[r];
    cplx corr = dot(q0, q1);
    for (int r = 0; r < m; ++r) q1[r] -= corr * q0[r];
    r01 += corr;
    r11 = nrm(q1);
    if (r11 == 0) throw IllConditionedError("rank-deficient design matrix in gamma extraction");
    for (auto& x : q1) x /= r11;
  }

  const int cols = static_cast<int>(B[0].size());
  std::vector<std::vector<cplx>> X(k, std::vector<cplx>(cols));
  for (int j = 0; j < cols; ++j) {
    std::vector<cplx> b(m);
    for (int r = 0; r < m; ++r) b[r] = B[r][j];
    cplx c0 = dot(q0, b);
    if (k == 1) {
      X[0][j] = c0 / r00;
    } else {
      cplx c1 = dot(q1, b);
      cplx x1 = c1 / r11;
      X[1][j] = x1;
      X[0][j] = (c0 - r01 * x1) / r00;
    }
  }
  return X;
}

inline std::vector<std::vector<cplx>> mat_mul(const std::vector<std::vector<cplx>>& A,
                                              const std::vector<std::vector<cplx>>& B) {
  const size_t n = A.size(), p = B.size(), q = p ? B[0].size() : 0;
  std::vector<std::vector<cplx>> C(n, std::vector<cplx>(q, cplx{0.0, 0.0}));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < p; ++l)
      for (size_t j = 0; j < q; ++j) C[i][j] += A[i][l] * B[l][j];
  return C;
}

// Largest entrywise difference relative to the largest reference entry.
inline double matrix_deviation(const std::vector<std::vector<cplx>>& got,
                               const std::vector<std::vector<cplx>>& want) {
  double scale = 0, dev = 0;
  for (const auto& row : want)
    for (const auto& x : row) scale = std::max(scale, std::abs(x));
  scale = std::max(scale, 1e-300);
  for (size_t i = 0; i < got.size(); ++i)
    for (size_t j = 0; j < got[i].size(); ++j)
      dev = std::max(dev, std::abs(got[i][j] - want[i][j]) / scale);
  return dev;
}

// Orbit permutation realized by the dilation y -> a^{-1} y on the
// indicator basis: indicator j pulls back to the indicator of the orbit
// containing a * sample_j. Tracked on the rational samples, not assumed.
inline std::vector<int> dilation_permutation(const SpaceDesc& d, const Rat& a) {
  if (a == 0) throw UsageError("dilation parameter must be nonzero");
  std::vector<int> perm(d.k_orbits(), -1);
  for (int j = 0; j < d.k_orbits(); ++j) {
    std::vector<Rat> y = d.orbits[j].sample;
    for (auto& c : y) c = c * a;
    int sg = sgn_rat(d.f.at(0).eval_rat(y));
    for (int i = 0; i < d.k_orbits(); ++i)
      if (d.orbits[i].sign.at(0) == sg) {
        perm[j] = i;
        break;
      }
    if (perm[j] < 0) throw InconsistentError("dilated sample escapes the open orbits");
  }
  return perm;
}

inline std::vector<std::vector<cplx>> permute_columns(const std::vector<std::vector<cplx>>& A,
                                                      const std::vector<int>& perm) {
  std::vector<std::vector<cplx>> out(A.size(), std::vector<cplx>(perm.size()));
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < perm.size(); ++j) out[i][j] = A[i][perm[j]];
  return out;
}

}  // namespace detail

// Extract gamma(lambda, psi) by least squares over the first basis_size
// Hermite-Gaussian test functions. Requires basis_size >= 2k. force_M
// and twist are forwarded to both zeta evaluations; force_M < 0 keeps
// the automatic descent depth. Entries are flagged IllConditioned when
// the design matrix condition exceeds 1e6.
inline GammaMatrix extract_gamma(const SpaceDesc& d, cplx lambda, const PsiCharacter& psi,
                                 int basis_size, const QuadConfig& cfg = {}, int force_M = -1,
                                 cplx twist = cplx{0.0, 0.0}) {
  d.require_rank1();
  const int k = d.k_orbits();
  if (basis_size < 2 * k)
    throw UsageError("basis_size must be at least twice the orbit count");

  const SpaceDesc dd = dual(d);
  const int kd = dd.k_orbits();

  int deg = detail::hermite_degree_for(d.dim, basis_size);
  std::vector<TestFunction> basis = hermite_basis(d.dim, deg);
  basis.resize(basis_size);

  GammaMatrix g;
  g.lambda = lambda;
  g.psi_a = psi.a;
  g.selfdual_rescale = fourier_selfdual_scale(psi, d.dim);

  std::vector<std::vector<cplx>> A(basis_size, std::vector<cplx>(k));
  std::vector<std::vector<cplx>> B(basis_size, std::vector<cplx>(kd));
  for (int m = 0; m < basis_size; ++m) {
    ZetaValue zp = z_continued(d, eta_ones(k), basis[m], lambda, cfg, force_M, twist);
    ZetaValue zd =
        z_continued(dd, eta_ones(kd), fourier(basis[m], psi), lambda, cfg, force_M, twist);
    detail::merge_flags(g.flags, zp.flags);
    detail::merge_flags(g.flags, zd.flags);
    for (int i = 0; i < k; ++i) A[m][i] = zp.orbit_breakdown[i];
    for (int j = 0; j < kd; ++j) B[m][j] = zd.orbit_breakdown[j];
  }

  std::vector<std::vector<cplx>> X = detail::lsq_solve(A, B, &g.condition_number);
  g.entries.assign(k, std::vector<cplx>(kd));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < kd; ++j) g.entries[i][j] = X[i][j];

  double rnum = 0, rden = 0;
  for (int m = 0; m < basis_size; ++m)
    for (int j = 0; j < kd; ++j) {
      cplx fit{0.0, 0.0};
      for (int i = 0; i < k; ++i) fit += A[m][i] * g.entries[i][j];
      rnum += std::norm(fit - B[m][j]);
      rden += std::norm(B[m][j]);
    }
  g.lsq_residual = std::sqrt(rnum / std::max(rden, 1e-300));
  if (!(g.condition_number < 1e6)) g.flags.push_back("IllConditioned");
  return g;
}

// gammacheck(dual, psi_{-a}) composed with gamma(psi_a) is A(psi_a)
// times the identity on the dual-side coefficients.
inline GammaCheck check_inversion(const SpaceDesc& d, cplx lambda, const PsiCharacter& psi,
                                  const QuadConfig& cfg = {}, int basis_size = 0) {
  const SpaceDesc dd = dual(d);
  if (basis_size <= 0) basis_size = 2 * std::max(d.k_orbits(), dd.k_orbits()) + 2;
  GammaMatrix g = extract_gamma(d, lambda, psi, basis_size, cfg);
  GammaMatrix gc = extract_gamma(dd, lambda, PsiCharacter{-psi.a}, basis_size, cfg);

  std::vector<std::vector<cplx>> prod = detail::mat_mul(gc.entries, g.entries);
  const double a_const = rat_d(a_psi(psi, d.dim));
  std::vector<std::vector<cplx>> want(prod.size(), std::vector<cplx>(prod.size(), cplx{0.0, 0.0}));
  for (size_t i = 0; i < want.size(); ++i) want[i][i] = a_const;

  GammaCheck out;
  out.name = "inversion";
  out.deviation = detail::matrix_deviation(prod, want);
  detail::merge_flags(out.flags, g.flags);
  detail::merge_flags(out.flags, gc.flags);
  out.notes.push_back("inversion constant " + std::to_string(a_const));
  return out;
}

// gamma(lambda, psi_a) = |a|^{lambda deg_fdual - dim/2} gamma(lambda,
// psi_1) composed with the orbit permutation of y -> a^{-1} y. The
// exponent comes from substituting y -> y/a on the reflected side: the
// lambda-independent part collapses to -dim/2 for every descriptor.
inline GammaCheck check_scaling(const SpaceDesc& d, cplx lambda, const Rat& a,
                                const QuadConfig& cfg = {}, int basis_size = 0) {
  if (basis_size <= 0) basis_size = 2 * d.k_orbits() + 2;
  GammaMatrix ga = extract_gamma(d, lambda, PsiCharacter{a}, basis_size, cfg);
  GammaMatrix g1 = extract_gamma(d, lambda, PsiCharacter{Rat(1)}, basis_size, cfg);

  const SpaceDesc dd = dual(d);
  std::vector<int> perm = detail::dilation_permutation(dd, a);
  double la = std::log(std::abs(rat_d(a)));
  cplx factor = std::exp((lambda * static_cast<double>(d.deg_fdual()) - 0.5 * d.dim) * la);
  std::vector<std::vector<cplx>> want = detail::permute_columns(g1.entries, perm);
  for (auto& row : want)
    for (auto& x : row) x *= factor;

  GammaCheck out;
  out.name = "scaling";
  out.deviation = detail::matrix_deviation(ga.entries, want);
  detail::merge_flags(out.flags, ga.flags);
  detail::merge_flags(out.flags, g1.flags);
  bool moved = false;
  for (size_t j = 0; j < perm.size(); ++j)
    if (perm[j] != static_cast<int>(j)) moved = true;
  out.notes.push_back(moved ? "orbit permutation nontrivial" : "orbit permutation trivial");
  return out;
}

// Unitary-normalized variant at lambda = 0: A(psi_a)^{-1/2} gamma(0,
// psi_a) equals gamma(0, psi_1) composed with the same permutation, with
// no dilation prefactor left over.
inline GammaCheck check_scaling_selfdual(const SpaceDesc& d, const Rat& a,
                                         const QuadConfig& cfg = {}, int basis_size = 0) {
  if (basis_size <= 0) basis_size = 2 * d.k_orbits() + 2;
  GammaMatrix ga = extract_gamma(d, cplx{0.0, 0.0}, PsiCharacter{a}, basis_size, cfg);
  GammaMatrix g1 = extract_gamma(d, cplx{0.0, 0.0}, PsiCharacter{Rat(1)}, basis_size, cfg);

  const SpaceDesc dd = dual(d);
  std::vector<int> perm = detail::dilation_permutation(dd, a);
  std::vector<std::vector<cplx>> got = ga.entries;
  for (auto& row : got)
    for (auto& x : row) x *= ga.selfdual_rescale;
  std::vector<std::vector<cplx>> want = detail::permute_columns(g1.entries, perm);

  GammaCheck out;
  out.name = "scaling-selfdual";
  out.deviation = detail::matrix_deviation(got, want);
  detail::merge_flags(out.flags, ga.flags);
  detail::merge_flags(out.flags, g1.flags);
  return out;
}

// The matrix function satisfies the shift identity: extraction at
// lambda + mu coincides with extraction at mu of the lambda-shifted
// family, realized by the twist offset.
inline GammaCheck check_translation(const SpaceDesc& d, cplx lambda, cplx mu,
                                    const PsiCharacter& psi, const QuadConfig& cfg = {},
                                    int basis_size = 0) {
  if (basis_size <= 0) basis_size = 2 * d.k_orbits() + 2;
  GammaMatrix direct = extract_gamma(d, lambda + mu, psi, basis_size, cfg);
  GammaMatrix shifted = extract_gamma(d, mu, psi, basis_size, cfg, -1, lambda);

  GammaCheck out;
  out.name = "translation";
  out.deviation = detail::matrix_deviation(shifted.entries, direct.entries);
  detail::merge_flags(out.flags, direct.flags);
  detail::merge_flags(out.flags, shifted.flags);
  return out;
}

// Multiplying the test function by h^M, h = f^2, shifts the parameter:
// on the primal side Z_lambda(eta, h^M xi) = Z_{lambda+2M}(eta, xi)
// exactly, while on the dual side
//
//   Z_dual_lambda(eta_j, F(h^M xi))
//     = (-c(psi))^{M deg h} * cap_M(sigma_dual(lambda)) *
//       Z_dual_{lambda+2M}(eta_j, F xi)
//
// with cap_M the certified Capelli eigenvalue of the dual pair. Both
// identities are checked per orbit over a small set of test functions.
inline GammaCheck check_hM_shift(const SpaceDesc& d, cplx lambda, int M,
                                 const PsiCharacter& psi, const QuadConfig& cfg = {}) {
  d.require_rank1();
  if (M < 0) throw UsageError("shift order must be nonnegative");
  const SpaceDesc dd = dual(d);
  const int k = d.k_orbits(), kd = dd.k_orbits();
  const QPoly hM = d.f.at(0).pow(2 * M);
  const int deg_h = 2 * d.deg_f();
  const cplx shifted = lambda + cplx{2.0 * M, 0.0};

  cplx minus_c_pow{1.0, 0.0};
  const cplx c = c_psi(psi).to_complex();
  for (int i = 0; i < M * deg_h; ++i) minus_c_pow *= -c;
  const cplx cap =
      capelli_eigenvalue(dd.f.at(0), dd.fdual.at(0), M).eval(b_argument(dd, lambda));

  GammaCheck out;
  out.name = "h-shift";
  std::vector<TestFunction> xis = hermite_basis(d.dim, d.dim == 1 ? 2 : 1);
  for (const auto& xi : xis) {
    const TestFunction xh = xi.multiplied(hM);

    ZetaValue pl = z_continued(d, eta_ones(k), xh, lambda, cfg);
    ZetaValue pr = z_continued(d, eta_ones(k), xi, shifted, cfg);
    detail::merge_flags(out.flags, pl.flags);
    detail::merge_flags(out.flags, pr.flags);
    double scale = 1e-300;
    for (int i = 0; i < k; ++i) scale = std::max(scale, std::abs(pr.orbit_breakdown[i]));
    for (int i = 0; i < k; ++i)
      out.deviation = std::max(
          out.deviation, std::abs(pl.orbit_breakdown[i] - pr.orbit_breakdown[i]) / scale);

    ZetaValue dl = z_continued(dd, eta_ones(kd), fourier(xh, psi), lambda, cfg);
    ZetaValue dr = z_continued(dd, eta_ones(kd), fourier(xi, psi), shifted, cfg);
    detail::merge_flags(out.flags, dl.flags);
    detail::merge_flags(out.flags, dr.flags);
    scale = 1e-300;
    for (int j = 0; j < kd; ++j)
      scale = std::max(scale, std::abs(minus_c_pow * cap * dr.orbit_breakdown[j]));
    for (int j = 0; j < kd; ++j)
      out.deviation = std::max(
          out.deviation,
          std::abs(dl.orbit_breakdown[j] - minus_c_pow * cap * dr.orbit_breakdown[j]) / scale);
  }
  out.notes.push_back("shift step 2M = " + std::to_string(2 * M));
  return out;
}

}  // namespace pvz
