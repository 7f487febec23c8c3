#include "twl/toeplitz.hpp"

#include "doctest.h"

using namespace twl;

TEST_CASE("exact and quadrature backends agree") {
  for (int d : {1, 2}) {
    std::vector<std::string> texts = {"1", "1+0.5*w1", "w0+2*w1+0.25*re_01",
                                      "1+0.1*im_01"};
    for (const auto& text : texts) {
      SymbolFunction f = SymbolFunction::parse(text);
      for (int k : {1, 3, 7, d == 1 ? 40 : 12}) {
        HardyBlock B = monomial_norms(k, d);
        ToeplitzBlock a = toeplitz_block(f, B, Backend::exact);
        ToeplitzBlock b = toeplitz_block(f, B, Backend::quadrature);
        double scale = std::max(1.0, a.T.norm());
        CHECK((a.T - b.T).norm() / scale < 1e-8);
        CHECK(a.herm_defect < 1e-8);
        CHECK(b.herm_defect < 1e-8);
      }
    }
  }
}

TEST_CASE("antisymmetric pairing entry carries the hand-computed sign") {
  // f = im_01 on d = 1, k = 3: the only surviving term between z^(3,0) and
  // z^(2,1) is -i/2 * z0 conj(z1) with pair integral pi 3! 1! / 5! = pi/20;
  // norms pi/4 and pi/12 give T(row=(3,0), col=(2,1)) = -i 3 sqrt(3)/10
  SymbolFunction f = SymbolFunction::parse("im_01");
  HardyBlock B = monomial_norms(3, 1);
  int r = B.index_of({3, 0});
  int c = B.index_of({2, 1});
  REQUIRE(r >= 0);
  REQUIRE(c >= 0);
  cplx expect(0.0, -3.0 * std::sqrt(3.0) / 10.0);
  for (Backend be : {Backend::exact, Backend::quadrature}) {
    ToeplitzBlock tb = toeplitz_block(f, B, be);
    CHECK(std::abs(tb.T(r, c) - expect) < 1e-10);
    CHECK(std::abs(tb.T(c, r) - std::conj(expect)) < 1e-10);
  }
}

TEST_CASE("moment symbol acts diagonally with the rational ladder") {
  // f = |z_1|^2 on d = 1: the basis monomial z^(a,b) is an eigenvector with
  // eigenvalue k (b+1)/(k+2)
  SymbolFunction f = SymbolFunction::parse("w1");
  for (int k : {1, 5, 20}) {
    HardyBlock B = monomial_norms(k, 1);
    ToeplitzBlock tb = toeplitz_block(f, B);
    for (int i = 0; i < B.dim(); ++i) {
      int b = B.alphas[i][1];
      CHECK(std::abs(tb.T(i, i) - k * (b + 1.0) / (k + 2.0)) < 1e-12);
      for (int j = 0; j < B.dim(); ++j)
        if (i != j) CHECK(std::abs(tb.T(i, j)) < 1e-14);
    }
  }
}

TEST_CASE("trace equals the kernel-diagonal integral") {
  // tr T_k = k * integral of f * (block dimension / vol) over the sphere;
  // for f = 1 + c w_1 the moment integral is explicit
  SymbolFunction f = SymbolFunction::parse("1+0.5*w1");
  for (int d : {1, 2}) {
    for (int k : {2, 9}) {
      HardyBlock B = monomial_norms(k, d);
      ToeplitzBlock tb = toeplitz_block(f, B);
      double vol = std::pow(kPi, d) / std::exp(log_factorial(d));
      double mean_f = 1.0 + 0.5 / (d + 1.0);
      double expect = k * B.dim() / vol * mean_f * vol;
      CHECK(std::abs(tb.T.trace().real() - expect) < 1e-8 * expect);
      CHECK(std::abs(tb.T.trace().imag()) < 1e-10);
    }
  }
}

TEST_CASE("spectrum stays inside k times the symbol range") {
  SymbolFunction f = SymbolFunction::parse("1+0.5*w1-0.25*w0");
  auto bounds = f.bounds_on_sphere(1);
  REQUIRE(bounds.exact);
  for (int k : {3, 11}) {
    HardyBlock B = monomial_norms(k, 1);
    ToeplitzBlock tb = toeplitz_block(f, B);
    Eigen::SelfAdjointEigenSolver<CMat> es(tb.T, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= k * bounds.lo - 1e-8 * k);
    CHECK(es.eigenvalues().maxCoeff() <= k * bounds.hi + 1e-8 * k);
  }
}

TEST_CASE("fiber-dependent expressions are rejected") {
  SymbolFunction f = SymbolFunction::parse("1+0.25*rz0", true);
  HardyBlock B = monomial_norms(3, 1);
  CHECK_THROWS_AS(toeplitz_block(f, B), Error);
}

TEST_CASE("sub-block equals the corresponding full-matrix restriction") {
  SymbolFunction f = SymbolFunction::parse("1+0.3*re_01");
  HardyBlock B = monomial_norms(4, 1);
  ToeplitzBlock tb = toeplitz_block(f, B);
  std::vector<int> all(B.dim());
  for (int i = 0; i < B.dim(); ++i) all[i] = i;
  CMat sub = toeplitz_sub_block(f, B, all);
  CHECK((sub - tb.T).norm() < 1e-12 * std::max(1.0, tb.T.norm()));
}

TEST_CASE("sub-block refuses a basis the symbol couples outward") {
  // re_01 moves z^(2,0) to z^(1,1), which is outside the chosen basis
  SymbolFunction f = SymbolFunction::parse("re_01");
  HardyBlock B = monomial_norms(2, 1);
  int idx = B.index_of({2, 0});
  REQUIRE(idx >= 0);
  CHECK_THROWS_AS(toeplitz_sub_block(f, B, {idx}), Error);
}

TEST_CASE("moment pair integral oracle") {
  CHECK(monomial_pair_integral({1, 1}, {1, 1}, 1) ==
        doctest::Approx(kPi / 6.0).epsilon(1e-12));
  CHECK(monomial_pair_integral({2, 0}, {1, 1}, 1) == 0.0);
  CHECK(monomial_pair_integral({0, 0}, {0, 0}, 2) ==
        doctest::Approx(kPi * kPi / 2.0).epsilon(1e-12));
}
