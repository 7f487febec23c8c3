#include "twl/symmetry.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"

using namespace twl;

namespace {

AmbientPoint diag_point() {
  CVec z(2);
  z << cplx(1.0 / std::sqrt(2.0), 0.0), cplx(1.0 / std::sqrt(2.0), 0.0);
  return make_point(z);
}

AmbientPoint equator_point() {
  CVec z(3);
  z << cplx(1.0 / std::sqrt(2.0), 0.0), cplx(1.0 / std::sqrt(2.0), 0.0),
      cplx(0.0, 0.0);
  return make_point(z);
}

}  // namespace

TEST_CASE("moment map sign fixed by the built-in self-test") {
  for (auto p : {Weights{-1, 1}, Weights{-2, 2}, Weights{1, 2},
                 Weights{-2, 2, 1}, Weights{3, -1, 2, 0}}) {
    CircleActionSpec a = make_action(p, static_cast<int>(p.size()) - 1);
    CHECK(a.sign == -1);
  }
}

TEST_CASE("moment map values") {
  CircleActionSpec a = make_action({-1, 1}, 1);
  CVec e0(2);
  e0 << cplx(1, 0), cplx(0, 0);
  CHECK(moment_map(a, make_point(e0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(moment_map(a, diag_point()) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("isotype weights and partition of a block") {
  CHECK(isotype_weight({-1, 1}, {3, 1}) == 2);
  CHECK(isotype_weight({-2, 2, 1}, {1, 0, 2}) == 0);

  for (auto p : {Weights{-1, 1}, Weights{-2, 2}}) {
    HardyBlock B = monomial_norms(6, 1);
    auto weights = isotype_weights_in_block(B, p);
    CHECK(std::is_sorted(weights.begin(), weights.end()));
    std::set<int> seen;
    int covered = 0;
    for (int varpi : weights) {
      auto basis = isotype_basis(B, p, varpi);
      CHECK(!basis.empty());
      for (int i : basis) {
        CHECK(seen.insert(i).second);  // disjoint
        CHECK(isotype_weight(p, B.alphas[i]) == varpi);
      }
      covered += static_cast<int>(basis.size());
    }
    CHECK(covered == B.dim());  // exhaustive
  }

  // weights of the degree-5 block under (-1, 1) are the odd ladder a - b
  HardyBlock B5 = monomial_norms(5, 1);
  auto w5 = isotype_weights_in_block(B5, {-1, 1});
  CHECK(w5 == std::vector<int>{-5, -3, -1, 1, 3, 5});
  CHECK(isotype_basis(B5, {-1, 1}, 0).empty());
}

TEST_CASE("stabilizers on the reduced circle of the basic action") {
  StabilizerInfo st = stabilizers({-1, 1}, diag_point());
  CHECK(st.order_X == 1);
  CHECK(st.order_M == 2);
  CHECK(st.sheets == 2);
  REQUIRE(st.angles_M.size() == 2);
  CHECK(st.angles_M[0] == doctest::Approx(0.0));
  CHECK(st.angles_M[1] == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("stabilizers with a genuine upstairs subgroup") {
  Weights p = {-2, 2, 1};
  AmbientPoint x = equator_point();
  StabilizerInfo st = stabilizers(p, x);
  CHECK(st.order_X == 2);
  CHECK(st.order_M == 4);
  CHECK(st.sheets == 2);
  // every listed upstairs angle fixes the point exactly
  for (double ang : st.angles_X)
    CHECK((action_rotate(p, ang, x.z) - x.z).norm() < 1e-12);
}

TEST_CASE("infinite stabilizers are rejected") {
  CVec e2(3);
  e2 << cplx(0, 0), cplx(0, 0), cplx(1, 0);
  // projective fixed point downstairs
  CHECK_THROWS_AS(stabilizers({-2, 2, 1}, make_point(e2)), Error);
  // fixed by the whole circle upstairs (zero weight on the support)
  CVec e0(2);
  e0 << cplx(1, 0), cplx(0, 0);
  CHECK_THROWS_AS(stabilizers({0, 1}, make_point(e0)), Error);
}

TEST_CASE("effective volumes and the determinant identity") {
  {
    AmbientPoint x = diag_point();
    EffectiveVolumes ev = effective_volume({-1, 1}, x);
    CHECK(ev.detC == doctest::Approx(kTwoPi).epsilon(1e-9));
    CHECK(ev.V_X == doctest::Approx(kTwoPi).epsilon(1e-9));
    CHECK(ev.V_M == doctest::Approx(kPi).epsilon(1e-9));
    StabilizerInfo st = stabilizers({-1, 1}, x);
    CHECK(ev.detC == doctest::Approx(st.order_M * ev.V_M).epsilon(1e-9));
    CHECK(ev.detC == doctest::Approx(st.order_X * ev.V_X).epsilon(1e-9));
  }
  {
    AmbientPoint x = diag_point();
    EffectiveVolumes ev = effective_volume({-2, 2}, x);
    CHECK(ev.detC == doctest::Approx(4.0 * kPi).epsilon(1e-9));
    StabilizerInfo st = stabilizers({-2, 2}, x);
    CHECK(st.order_X == 2);
    CHECK(ev.V_X == doctest::Approx(kTwoPi).epsilon(1e-9));
    CHECK(ev.V_M == doctest::Approx(kPi).epsilon(1e-9));
    CHECK(st.order_M == 4);
  }
}

TEST_CASE("character averages over cyclic stabilizers") {
  StabilizerInfo st = stabilizers({-2, 2}, diag_point());
  REQUIRE(st.order_X == 2);
  CHECK(average_character(st, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(average_character(st, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(average_character(st, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(average_character(st, -3) == doctest::Approx(0.0).epsilon(1e-12));

  StabilizerInfo triv = stabilizers({-1, 1}, diag_point());
  REQUIRE(triv.order_X == 1);
  for (int varpi : {-2, 0, 5})
    CHECK(average_character(triv, varpi) == doctest::Approx(1.0));
}

TEST_CASE("stabilizer jacobian is unitary and acts as expected") {
  Weights p = {-2, 2, 1};
  AmbientPoint x = equator_point();
  HeisenbergChart ch = heisenberg_chart(x);
  CMat A = stabilizer_jacobian(ch, p, kPi);
  REQUIRE(A.rows() == 2);
  CHECK((A.adjoint() * A - CMat::Identity(2, 2)).norm() < 1e-6);

  // the last-coordinate direction flips under the half turn, while the
  // direction along the generator's complex line is preserved
  CVec e2(3);
  e2 << cplx(0, 0), cplx(0, 0), cplx(1, 0);
  CVec a2 = ch.chart_vec(e2);
  CHECK((A * a2 + a2).norm() < 1e-6);
  CVec u1(3);
  u1 << cplx(1.0 / std::sqrt(2.0), 0.0), cplx(-1.0 / std::sqrt(2.0), 0.0),
      cplx(0, 0);
  CVec a1 = ch.chart_vec(u1);
  CHECK((A * a1 - a1).norm() < 1e-6);
}
