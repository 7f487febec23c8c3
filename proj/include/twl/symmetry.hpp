#pragma once
// Weighted circle symmetry: moment map with the sign pinned by a built-in
// finite-difference self-test, isotype decomposition of Hardy blocks, finite
// stabilizers upstairs and downstairs, effective orbit volumes, and the
// stabilizer's linearized action in a chart.
//
// Conventions: the generator is xi(z) = i diag(p) z; the moment map is
// Phi = sign * sum_j p_j |z_j|^2 where the sign is chosen so that
// d(Phi)(v) = 2 omega(xi_M, v) on horizontal vectors; the monomial z^alpha
// carries isotype weight -<p, alpha>.

#include "twl/geometry.hpp"
#include "twl/hardy.hpp"

namespace twl {

struct CircleActionSpec {
  Weights p;
  int sign = -1;  // established by the constructor's self-test
};

// Validates the weight vector (size d+1, not all zero) and runs the moment
// map sign self-test at deterministic generic points.
CircleActionSpec make_action(const Weights& p, int d);

double moment_map(const CircleActionSpec& a, const AmbientPoint& x);

// isotype weight of the monomial z^alpha under the induced representation
int isotype_weight(const Weights& p, const MultiIndex& alpha);

// all isotype weights present in a block, ascending
std::vector<int> isotype_weights_in_block(const HardyBlock& B,
                                          const Weights& p);

// basis indices of the weight-varpi isotype inside a block (may be empty)
std::vector<int> isotype_basis(const HardyBlock& B, const Weights& p,
                               int varpi);

struct StabilizerInfo {
  int order_X = 1;  // finite stabilizer upstairs on the sphere
  int order_M = 1;  // finite stabilizer downstairs on projective space
  int sheets = 1;   // order_M / order_X
  std::vector<double> angles_X;  // group elements as angles in [0, 2 pi)
  std::vector<double> angles_M;
};

// Errors when the stabilizer is infinite (projective fixed point or a point
// fixed by the whole circle upstairs).
StabilizerInfo stabilizers(const Weights& p, const AmbientPoint& x);

struct EffectiveVolumes {
  double V_X = 0.0;   // effective orbit volume upstairs
  double V_M = 0.0;   // effective orbit volume downstairs
  double detC = 0.0;  // 2 pi ||xi_M||; equals order_M * V_M = order_X * V_X
                      // on the zero locus
};

EffectiveVolumes effective_volume(const Weights& p, const AmbientPoint& x);

// group average of the weight-varpi character over the upstairs stabilizer:
// (1/|G|) sum_g exp(i varpi angle_g); real (0 or 1 for cyclic stabilizers)
double average_character(const StabilizerInfo& st, int varpi);

// Linearized action of a stabilizer element on the chart coordinate at a
// fixed center: the map w -> coords(rotate(point(0, w))) is holomorphic and
// unitary at 0; returns its d x d complex derivative.  Pre: the rotation by
// `angle` fixes the chart center in projective space.
CMat stabilizer_jacobian(const HeisenbergChart& ch, const Weights& p,
                         double angle);

}  // namespace twl
