// Test-function calculus: exact Fourier transforms checked against
// brute-force oscillatory quadrature, coefficient-level identities,
// inversion, eigenbasis behavior, and Parseval.

#include <catch2/catch_amalgamated.hpp>
#include <complex>

#include "pvzeta/quad.hpp"
#include "pvzeta/testfun.hpp"

using namespace pvz;
using cplx = std::complex<double>;

namespace {

// Brute-force F_psi(xi)(y) = int xi(x) exp(2 pi i a <x,y>) dx over
// [-8, 8]^n with a fixed fine tensor Gauss rule. Width-1-ish data decays
// to ~1e-80 at the boundary, so truncation is far below test tolerance.
cplx fourier_oracle(const CompiledTestFunction& xi, double a, const std::vector<double>& y) {
  const GLRule& rule = gauss_legendre(64);
  const double R = 8.0;
  const int panels = 4;  // 4 panels x 64 nodes per axis
  std::vector<double> nodes, weights;
  for (int p = 0; p < panels; ++p) {
    double lo = -R + 2 * R * p / panels, hi = -R + 2 * R * (p + 1) / panels;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      nodes.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.x[i]);
      weights.push_back(0.5 * (hi - lo) * rule.w[i]);
    }
  }
  const int N = static_cast<int>(nodes.size());
  KahanC acc;
  std::vector<double> x(xi.n);
  std::vector<int> idx(xi.n, 0);
  while (true) {
    double w = 1, dot = 0;
    for (int d = 0; d < xi.n; ++d) {
      x[d] = nodes[idx[d]];
      w *= weights[idx[d]];
      dot += x[d] * y[d];
    }
    cplx phase = std::exp(cplx(0, 2 * std::numbers::pi * a * dot));
    acc.add(xi.eval(x) * phase * w);
    int d = 0;
    while (d < xi.n) {
      if (++idx[d] < N) break;
      idx[d] = 0;
      ++d;
    }
    if (d == xi.n) break;
  }
  return acc.get();
}

double max_dev_on_grid(const TestFunction& exact, const CompiledTestFunction& xi, double a) {
  CompiledTestFunction ex = exact.compile();
  double dev = 0;
  std::vector<std::vector<double>> pts;
  if (xi.n == 1)
    pts = {{0.0}, {0.3}, {-0.7}, {1.1}, {1.9}};
  else if (xi.n == 2)
    pts = {{0.0, 0.0}, {0.4, -0.2}, {-0.9, 0.5}, {1.2, 0.8}, {0.1, -1.4}};
  else
    pts = {{0.0, 0.0, 0.0}, {0.4, -0.2, 0.3}, {-0.6, 0.5, -0.8}};
  for (const auto& y : pts) dev = std::max(dev, std::abs(ex.eval(y) - fourier_oracle(xi, a, y)));
  return dev;
}

}  // namespace

TEST_CASE("fourier transform of gaussian and polynomial data", "[schwartz]") {
  // Seed: F(e^{-pi x^2}) = e^{-pi y^2}; F(x G) = i y G; F(x^2 G) = (1/(2 pi) - y^2) G.
  TestFunction g = TestFunction::gaussian(1);
  TestFunction fg = fourier(g, PsiCharacter{Rat(1)});
  CHECK(fg.width == Rat(1));
  CHECK(fg.poly == g.poly);
  CHECK(fg.side == Side::Dual);

  TestFunction xg = g.multiplied(QPoly::var(1, 0));
  TestFunction fxg = fourier(xg, PsiCharacter{Rat(1)});
  REQUIRE(fxg.poly.t.size() == 1);
  CHECK(fxg.poly.t.begin()->first == Expo{1});
  CHECK(fxg.poly.t.begin()->second == PiLaurent::term(0, GaussRat{Rat(0), Rat(1)}));

  TestFunction x2g = g.multiplied(QPoly::monomial(1, {2}, Rat(1)));
  TestFunction fx2g = fourier(x2g, PsiCharacter{Rat(1)});
  CPoly expected(1);
  expected.add_term({0}, PiLaurent::term(-1, GaussRat{rat(1, 2), Rat(0)}));
  expected.add_term({2}, PiLaurent(Rat(-1)));
  CHECK(fx2g.poly == expected);
}

TEST_CASE("fourier matches oscillatory quadrature", "[schwartz]") {
  // One representative per dimension and character, double precision.
  for (double a : {1.0, 2.0, -1.0, 0.5}) {
    Rat ar = rat_parse(a == 0.5 ? "1/2" : std::to_string(static_cast<long>(a)));
    PsiCharacter psi{ar};
    TestFunction f1 = TestFunction::gaussian(1)
                          .multiplied(QPoly::monomial(1, {2}, Rat(3)))
                          .multiplied(QPoly::var(1, 0));  // 3 x^3 G
    CHECK(max_dev_on_grid(fourier(f1, psi), f1.compile(), rat_d(ar)) < 1e-10);
  }
  {
    PsiCharacter psi{Rat(1)};
    auto basis2 = hermite_basis(2, 2);
    TestFunction f2 = basis2[3];  // a genuinely 2d element
    CHECK(max_dev_on_grid(fourier(f2, psi), f2.compile(), 1.0) < 1e-10);
    PsiCharacter psi2{Rat(-2)};
    CHECK(max_dev_on_grid(fourier(f2, psi2), f2.compile(), -2.0) < 1e-10);
  }
  {
    PsiCharacter psi{Rat(1)};
    auto basis3 = hermite_basis(3, 2);
    TestFunction f3 = basis3[5];
    CHECK(max_dev_on_grid(fourier(f3, psi), f3.compile(), 1.0) < 1e-9);
  }
}

TEST_CASE("fourier commutes with coordinate multiplication", "[schwartz]") {
  // F(x_j xi) = c(psi) d_j F(xi), exact at the coefficient level.
  for (const Rat& a : {Rat(1), Rat(2), rat(-1, 2)}) {
    PsiCharacter psi{a};
    PiLaurent c = c_psi(psi);
    auto basis = hermite_basis(2, 3);
    for (const auto& xi : {basis[1], basis[4], basis[7]}) {
      for (int j = 0; j < 2; ++j) {
        TestFunction lhs = fourier(xi.multiplied(QPoly::var(2, j)), psi);
        TestFunction rhs = fourier(xi, psi).derivative(j).scaled(c);
        CHECK(lhs.poly == rhs.poly);
        CHECK(lhs.width == rhs.width);
      }
    }
  }
}

TEST_CASE("fourier inversion is exact", "[schwartz]") {
  for (const Rat& a : {Rat(1), Rat(2), rat(-3, 2)}) {
    PsiCharacter psi{a}, psi_neg{-a};
    for (int n : {1, 2}) {
      auto basis = hermite_basis(n, 3);
      for (std::size_t i = 0; i < basis.size(); i += 3) {
        TestFunction round = fourier(fourier(basis[i], psi), psi_neg);
        TestFunction expected = basis[i].scaled(PiLaurent(a_psi(psi, n)));
        CHECK(round.poly == expected.poly);
        CHECK(round.width == basis[i].width);
        CHECK(round.side == basis[i].side);
      }
    }
  }
}

TEST_CASE("hermite ladder diagonalizes the standard transform", "[schwartz]") {
  PsiCharacter psi{Rat(1)};
  auto basis = hermite_basis(1, 5);
  for (std::size_t m = 0; m < basis.size(); ++m) {
    TestFunction lhs = fourier(basis[m], psi);
    GaussRat im{Rat(0), Rat(1)};  // i
    GaussRat eig{Rat(1), Rat(0)};
    for (std::size_t k = 0; k < m; ++k) eig = eig * im;
    TestFunction rhs = basis[m].scaled(PiLaurent(eig));
    CHECK(lhs.poly == rhs.poly);
  }
  // 2d: eigenvalue i^{|alpha|}.
  auto basis2 = hermite_basis(2, 2);
  REQUIRE(basis2.size() == 6);
  TestFunction mixed = basis2[4];  // alpha = (1,1)
  CHECK(fourier(mixed, psi).poly == mixed.scaled(PiLaurent(GaussRat{Rat(-1), Rat(0)})).poly);
}

TEST_CASE("basis enumeration is graded and deterministic", "[schwartz]") {
  auto b = hermite_basis(2, 2);
  REQUIRE(b.size() == 6);  // C(2+2, 2)
  CHECK(b[0].degree() == 0);
  CHECK(b[1].degree() == 1);
  CHECK(b[2].degree() == 1);
  CHECK(b[3].degree() == 2);
  CHECK(hermite_basis(3, 2).size() == 10);
  CHECK(hermite_basis(1, 8).size() == 9);
  // Same call, same order.
  auto b2 = hermite_basis(2, 2);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i].poly == b2[i].poly);
}

TEST_CASE("derivatives and dilation", "[schwartz]") {
  TestFunction g = TestFunction::gaussian(1);
  TestFunction dg = g.derivative(0);
  // d/dx e^{-pi x^2} = -2 pi x e^{-pi x^2}
  REQUIRE(dg.poly.t.size() == 1);
  CHECK(dg.poly.t.begin()->second == PiLaurent::term(1, GaussRat{Rat(-2), Rat(0)}));

  TestFunction d2 = g.dilated(Rat(2));  // e^{-4 pi x^2}
  CHECK(d2.width == Rat(2));
  CHECK(std::abs(d2.eval({0.5}).real() - std::exp(-std::numbers::pi)) < 1e-15);

  // Scaling bridge: F(xi(a .))(y) = |a|^{-n} F(xi)(y/a), checked numerically.
  TestFunction xi = TestFunction::gaussian(1).multiplied(QPoly::monomial(1, {2}, Rat(1)));
  TestFunction lhs = fourier(xi.dilated(Rat(3)), PsiCharacter{Rat(1)});
  TestFunction rhs = fourier(xi, PsiCharacter{Rat(1)});
  for (double y : {0.2, 0.9, -1.3}) {
    cplx l = lhs.eval({y});
    cplx r = rhs.eval({y / 3.0}) / 3.0;
    CHECK(std::abs(l - r) < 1e-14);
  }
}

TEST_CASE("parseval identity", "[schwartz]") {
  // int |xi|^2 = A(psi)^{-1} ... for the unitary variant; with the plain
  // transform int |F xi|^2 = |a|^{-n} int |xi|^2 for real-valued xi.
  const GLRule& rule = gauss_legendre(64);
  auto l2 = [&](const TestFunction& f) {
    CompiledTestFunction c = f.compile();
    double acc = 0;
    for (int p = 0; p < 4; ++p) {
      double lo = -8 + 4.0 * p, hi = lo + 4.0;
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.x[i];
        acc += 0.5 * (hi - lo) * rule.w[i] * std::norm(c.eval({x}));
      }
    }
    return acc;
  };
  auto basis = hermite_basis(1, 3);
  for (const auto& xi : basis) {
    for (const Rat& a : {Rat(1), Rat(2)}) {
      TestFunction fxi = fourier(xi, PsiCharacter{a});
      double lhs = l2(fxi);
      double rhs = rat_d(a_psi(PsiCharacter{a}, 1)) * l2(xi);
      CHECK(std::abs(lhs - rhs) < 1e-8 * (1 + rhs));
    }
  }
}
