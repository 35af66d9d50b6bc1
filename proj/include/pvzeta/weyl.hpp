#pragma once

// Bernstein-Sato data and Capelli-type eigenvalues for a pair of dual
// invariants (f, fdual), derived symbolically and certified exactly.

#include "pvzeta/errors.hpp"
#include "pvzeta/poly.hpp"
#include "pvzeta/s_poly.hpp"
#include "pvzeta/symbolic_power.hpp"

namespace pvz {

// The polynomial b with fdual(d) f^{s+1} = b(s) f^s, certified by exact
// zero remainder of the symbolic computation. Throws NotEigenError when
// f^{s+1} is not an eigenvector of fdual(d) modulo lower powers.
inline PolyS b_function(const QPoly& f, const QPoly& fdual) {
  SymbolicPower expr = SymbolicPower::power_s_plus_1(f);
  SymbolicPower res = apply_operator(fdual, expr);
  res.normalize();
  if (res.parts.empty()) return PolyS();
  if (res.parts.size() != 1 || res.parts.begin()->first != 0)
    throw NotEigenError("b_function: residual parts below f^s");
  const SPoly& p0 = res.parts.begin()->second;
  if (!p0.is_constant())
    throw NotEigenError("b_function: nonconstant multiplier on f^s");
  return p0.constant_term();
}

// Scalar rho with b_{c f} = rho * b_f for the rescaled invariant c*f;
// verified exactly, not assumed.
inline Rat rescale_factor(const QPoly& f, const QPoly& fdual, const Rat& c) {
  PolyS b = b_function(f, fdual);
  PolyS bc = b_function(f.scaled_rat(c), fdual);
  if (b.is_zero() || bc.is_zero())
    throw NotEigenError("rescale_factor: degenerate b");
  Rat rho = bc.lead() / b.lead();
  if (bc != b * rho) throw NotEigenError("rescale_factor: not proportional");
  return rho;
}

// Eigenvalue c(s) of the order-2M pair (f^{2M}, fdual^{2M}(d)) on f^s:
// apply fdual(d)^{2M}, multiply back by f^{2M}, demand collapse to a
// single scalar multiple of f^s.
inline PolyS capelli_eigenvalue(const QPoly& f, const QPoly& fdual, int M) {
  if (M < 0) throw std::domain_error("capelli_eigenvalue: M < 0");
  if (M == 0) return PolyS(Rat(1));
  SymbolicPower expr = SymbolicPower::power_s(f);
  SymbolicPower res = apply_operator(fdual.pow(2 * M), expr);
  res = res.multiplied(f.pow(2 * M));
  res.normalize();
  if (res.parts.size() != 1 || res.parts.begin()->first != 0)
    throw NotEigenError("capelli_eigenvalue: residual parts");
  const SPoly& p0 = res.parts.begin()->second;
  if (!p0.is_constant())
    throw NotEigenError("capelli_eigenvalue: nonconstant multiplier");
  return p0.constant_term();
}

// Same operator conjugated by f^{2 mplus}: eigenvalue on f^{s + 2 mplus},
// computed through an explicit polynomial prefactor (no composition).
inline PolyS twisted_capelli_eigenvalue(const QPoly& f, const QPoly& fdual, int M,
                                        int mplus) {
  if (M < 0 || mplus < 0) throw std::domain_error("twisted_capelli_eigenvalue: bad args");
  if (M == 0) return PolyS(Rat(1));
  QPoly pre = f.pow(2 * mplus);
  SymbolicPower expr = SymbolicPower::with_prefactor(f, pre);
  SymbolicPower res = apply_operator(fdual.pow(2 * M), expr);
  res = res.multiplied(f.pow(2 * M));
  res.normalize();
  if (res.parts.size() != 1 || res.parts.begin()->first != 0)
    throw NotEigenError("twisted_capelli_eigenvalue: residual parts");
  auto q = divide_exact(res.parts.begin()->second, pre);
  if (!q || !q->is_constant())
    throw NotEigenError("twisted_capelli_eigenvalue: prefactor does not divide");
  return q->constant_term();
}

// Conjugating the Capelli pair by the m-th power of the stored
// nondegenerate invariant f^2 shifts the eigenvalue argument by 2m.
// Verified for signed m through the computable positive-power route.
inline bool twist_shift_check(const QPoly& f, const QPoly& fdual, int M, int m) {
  PolyS c = capelli_eigenvalue(f, fdual, M);
  int mplus = m >= 0 ? m : -m;
  PolyS ct = twisted_capelli_eigenvalue(f, fdual, M, mplus);
  if (m >= 0) return ct == c.compose_shift(Rat(2 * m));
  return c == ct.compose_shift(Rat(2 * m));
}

// Top coefficient of c evaluated with the top monomial at s = at:
// lead(c) * at^{deg c}. Nonzero for nondegenerate data.
inline Rat leading_coeff_at(const PolyS& c, const Rat& at) {
  if (c.is_zero()) return Rat(0);
  return c.lead() * rat_pow(at, c.degree());
}

}  // namespace pvz
