#include "twl/hardy.hpp"

#include <cmath>

#include "doctest.h"

using namespace twl;

TEST_CASE("block dimensions and norm values") {
  // dim H_k = C(k + d, d)
  CHECK(monomial_norms(3, 1).dim() == 4);
  CHECK(monomial_norms(4, 2).dim() == 15);
  CHECK(monomial_norms(0, 3).dim() == 1);

  // d = 1: ||z0^a z1^b||^2 = pi a! b! / (k + 1)!
  HardyBlock B = monomial_norms(3, 1);
  int i = B.index_of(MultiIndex{2, 1});
  REQUIRE(i >= 0);
  CHECK(std::exp(B.log_norm2[i]) ==
        doctest::Approx(kPi * 2.0 * 1.0 / 24.0).epsilon(1e-13));

  // d = 2 spot value: ||z^(1,1,0)||^2 = pi^2 * 1 / (2+2)! = pi^2/24
  HardyBlock B2 = monomial_norms(2, 2);
  int j = B2.index_of(MultiIndex{1, 1, 0});
  REQUIRE(j >= 0);
  CHECK(std::exp(B2.log_norm2[j]) ==
        doctest::Approx(kPi * kPi / 24.0).epsilon(1e-13));
}

TEST_CASE("monomial norms against a frozen-seed Monte Carlo oracle") {
  // Sample z uniformly on the sphere (complex normal / norm); then
  // E[|z^alpha|^2] * vol(X) = ||z^alpha||^2.  10^6 samples give ~1e-3
  // relative accuracy for small alpha.
  SplitMix64 rng(20260823);
  const int N = 1000000;
  MultiIndex a{1, 1};  // expect pi * 1 / 3! = pi/6
  double acc = 0.0;
  for (int s = 0; s < N; ++s) {
    CVec z = rng.cnormal(2);
    z /= z.norm();
    acc += std::norm(z[0]) * std::norm(z[1]);
  }
  double vol = kPi;  // d = 1
  double mc = acc / N * vol;
  CHECK(std::abs(mc - kPi / 6.0) / (kPi / 6.0) < 1e-3);
}

TEST_CASE("quadrature orthogonality of monomials") {
  // off-diagonal pairs integrate to zero, diagonal to the closed form
  HardyBlock B = monomial_norms(4, 1);
  for (int i = 0; i < B.dim(); ++i) {
    for (int j = 0; j < B.dim(); ++j) {
      cplx acc = 0.0;
      sphere_nodes(1, 16, 12, [&](const CVec& z, double wt) {
        cplx zi = std::pow(z[0], B.alphas[i][0]) * std::pow(z[1], B.alphas[i][1]);
        cplx zj = std::pow(z[0], B.alphas[j][0]) * std::pow(z[1], B.alphas[j][1]);
        acc += wt * zi * std::conj(zj);
      });
      if (i == j) {
        CHECK(std::abs(acc - std::exp(B.log_norm2[i])) < 1e-12);
      } else {
        CHECK(std::abs(acc) < 1e-12);
      }
    }
  }
}

TEST_CASE("normalized sections evaluate consistently in the log domain") {
  SplitMix64 rng(99);
  HardyBlock B = monomial_norms(6, 2);
  for (int trial = 0; trial < 10; ++trial) {
    AmbientPoint x = normalize_point(rng.cnormal(3));
    CVec all = evaluate_all(B, x.z);
    for (int i = 0; i < B.dim(); ++i) {
      // direct power evaluation for a small block
      cplx direct = 1.0;
      for (int j = 0; j < 3; ++j)
        direct *= std::pow(x.z[j], B.alphas[i][j]);
      direct /= std::exp(0.5 * B.log_norm2[i]);
      CHECK(std::abs(all[i] - direct) < 1e-12 * (1.0 + std::abs(direct)));
      CHECK(std::abs(all[i] - evaluate_section(B, i, x.z)) == 0.0);
    }
  }
}

TEST_CASE("sections with zero coordinates evaluate to exact zeros") {
  HardyBlock B = monomial_norms(5, 1);
  CVec z(2);
  z << 1.0, 0.0;
  int i = B.index_of(MultiIndex{4, 1});
  REQUIRE(i >= 0);
  CHECK(evaluate_section(B, i, z) == cplx(0.0, 0.0));
  int j = B.index_of(MultiIndex{5, 0});
  REQUIRE(j >= 0);
  CHECK(std::abs(evaluate_section(B, j, z)) ==
        doctest::Approx(std::sqrt(6.0 / kPi)).epsilon(1e-13));
}

TEST_CASE("closed-form kernel equals the basis sum") {
  SplitMix64 rng(7);
  for (int d : {1, 2}) {
    HardyBlock B = monomial_norms(8, d);
    for (int trial = 0; trial < 8; ++trial) {
      AmbientPoint x = normalize_point(rng.cnormal(d + 1));
      AmbientPoint y = normalize_point(rng.cnormal(d + 1));
      cplx closed = szego_kernel(8, d, x.z, y.z);
      cplx summed = szego_kernel_sum(B, x.z, y.z);
      CHECK(std::abs(closed - summed) < 1e-11 * (1.0 + std::abs(closed)));
    }
  }
}

TEST_CASE("kernel diagonal value") {
  // d = 1 diagonal: (k + 1)/pi
  SplitMix64 rng(13);
  AmbientPoint x = normalize_point(rng.cnormal(2));
  for (int k : {1, 5, 40, 500}) {
    cplx diag = szego_kernel(k, 1, x.z, x.z);
    CHECK(diag.real() == doctest::Approx((k + 1) / kPi).epsilon(1e-12));
    CHECK(std::abs(diag.imag()) < 1e-12 * diag.real());
  }
}

TEST_CASE("log-domain evaluation stays finite at large degree") {
  HardyBlock B = monomial_norms(800, 1);
  CVec z(2);
  z << std::sqrt(0.5), std::sqrt(0.5);
  CVec all = evaluate_all(B, z);
  CHECK(all.allFinite());
  // reproducing property: sum |s_a(x)|^2 = Pi_k(x, x) = (k+1)/pi
  CHECK(all.squaredNorm() == doctest::Approx(801.0 / kPi).epsilon(1e-11));
}

TEST_CASE("psi2 algebraic identities") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    CVec u = rng.cnormal(2), v = rng.cnormal(2);
    // Hermitian symmetry psi2(v, u) = conj(psi2(u, v))
    CHECK(std::abs(psi2(v, u) - std::conj(psi2(u, v))) < 1e-13);
    // diagonal: psi2(u, u) = 0
    CHECK(std::abs(psi2(u, u)) < 1e-13);
    // explicit form <u,v> - |u|^2/2 - |v|^2/2
    cplx expl = herm(u, v) - 0.5 * u.squaredNorm() - 0.5 * v.squaredNorm();
    CHECK(std::abs(psi2(u, v) - expl) < 1e-13);
  }
}

TEST_CASE("near-diagonal kernel scaling approaches the model exponent") {
  SplitMix64 rng(29);
  for (int d : {1, 2}) {
    AmbientPoint x = normalize_point(rng.cnormal(d + 1));
    CVec u = rng.cnormal(d);
    CVec v = rng.cnormal(d);
    u *= 1.2 / u.norm();
    v *= 0.9 / v.norm();
    double prev = 1e9;
    for (int k : {100, 1000, 10000, 100000}) {
      SzegoCheck c = near_diagonal_szego(k, x, u, v);
      CHECK(c.rel_err < 20.0 / k);  // O(1/k) envelope with margin
      CHECK(c.rel_err < prev);      // monotone improvement on this ladder
      prev = c.rel_err;
    }
  }
}
