#pragma once
// Degree-k Hardy blocks on the sphere: the space H_k spanned by monomials
// z^alpha with |alpha| = k, orthogonal for the L^2 pairing against dV_X with
//     ||z^alpha||^2 = pi^d alpha! / (k + d)!.
// All evaluations run in the log domain so blocks stay usable for k in the
// thousands.  The reproducing kernel of H_k is
//     Pi_k(x, y) = (k+d)! / (pi^d k!) <x, y>^k.

#include <unordered_map>

#include "twl/geometry.hpp"

namespace twl {

struct HardyBlock {
  int k = 0;
  int d = 0;
  std::vector<MultiIndex> alphas;  // deterministic shared order
  RVec log_norm2;                  // log ||z^alpha||^2 per basis element

  int dim() const { return static_cast<int>(alphas.size()); }
  int index_of(const MultiIndex& a) const;  // -1 when absent

  // private lookup table, built once
  std::unordered_map<std::string, int> lookup;
};

HardyBlock monomial_norms(int k, int d);

// Shared per-point state for evaluating many normalized monomials at one z:
// stores log moduli and phases per coordinate, so each monomial costs O(d).
struct PointEvaluator {
  explicit PointEvaluator(const CVec& z);
  // s_alpha(z) = z^alpha / ||z^alpha|| given log ||z^alpha||^2
  cplx monomial(const MultiIndex& a, double log_norm2) const;

  std::vector<double> lg, ph;
  std::vector<bool> zero;
};

// Normalized basis section s_alpha(z) = z^alpha / ||z^alpha|| at an ambient
// point (z need not be normalized for the algebraic value; callers pass
// sphere points).  Log-domain internally.
cplx evaluate_section(const HardyBlock& B, int idx, const CVec& z);

// All dim(B) sections at once (shares the per-coordinate logs/phases).
CVec evaluate_all(const HardyBlock& B, const CVec& z);

// Closed-form reproducing kernel and the same kernel summed over the basis
// (the latter is the cross-check path, cost O(dim)).
cplx szego_kernel(int k, int d, const CVec& x, const CVec& y);
cplx szego_kernel_sum(const HardyBlock& B, const CVec& x, const CVec& y);

// Quadratic model exponent: psi2(u, v) = -i omega0(u, v) - ||u - v||^2 / 2.
cplx psi2(const CVec& u, const CVec& v);

// Near-diagonal scaling check at a chart center: compares
//   (pi / k)^d Pi_k(x_u, x_v),  x_w = chart(0, w / sqrt(k)),
// against exp(psi2(u, v)); the gap closes at rate O(1/k).
struct SzegoCheck {
  cplx measured;
  cplx predicted;
  double rel_err;
};
SzegoCheck near_diagonal_szego(int k, const AmbientPoint& x, const CVec& u,
                               const CVec& v);

}  // namespace twl
