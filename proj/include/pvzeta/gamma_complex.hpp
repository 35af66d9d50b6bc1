#pragma once

// Complex log-gamma (Lanczos, g = 7) with reflection for Re z < 1/2.
// Branch offsets of 2 pi i k wash out in every use here (ratios and
// exponentials of differences).

#include <cmath>
#include <complex>
#include <numbers>

namespace pvz {

inline std::complex<double> lgamma_c(std::complex<double> z) {
  static const double coef[9] = {0.99999999999980993,     676.5203681218851,
                                 -1259.1392167224028,     771.32342877765313,
                                 -176.61502916214059,     12.507343278686905,
                                 -0.13857109526572012,    9.9843695780195716e-6,
                                 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    const double pi = std::numbers::pi;
    return std::log(pi / std::sin(pi * z)) - lgamma_c(1.0 - z);
  }
  z -= 1.0;
  std::complex<double> x = coef[0];
  for (int i = 1; i < 9; ++i) x += coef[i] / (z + static_cast<double>(i));
  std::complex<double> t = z + 7.5;
  return 0.5 * std::log(2 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline std::complex<double> tgamma_c(std::complex<double> z) { return std::exp(lgamma_c(z)); }

// gamma_R(s) = pi^{-s/2} Gamma(s/2).
inline std::complex<double> lgamma_r(std::complex<double> s) {
  return -0.5 * s * std::log(std::numbers::pi) + lgamma_c(0.5 * s);
}

inline std::complex<double> tgamma_r(std::complex<double> s) { return std::exp(lgamma_r(s)); }

}  // namespace pvz
