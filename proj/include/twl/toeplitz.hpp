#pragma once
// Toeplitz blocks T_k = k * P_k M_f P_k on the degree-k Hardy space, in the
// normalized monomial basis.  Two assembly backends:
//   exact      - term-by-term moment integrals (grammar symbols are
//                polynomials in z, conj(z), so this is always available)
//   quadrature - rank-1 accumulation of wt * f(z) s(z) s(z)^H over the
//                simplex x torus rule; used to cross-check the exact path.
// Blocks are Hermitian-symmetrized; the pre-symmetrization defect is kept.

#include "twl/hardy.hpp"
#include "twl/symbol.hpp"

namespace twl {

enum class Backend { exact, quadrature };

struct ToeplitzBlock {
  int k = 0;
  CMat T;
  double herm_defect = 0.0;  // ||M - M^H||_F / max(1, ||M||_F) before fixing
};

// integral of z^a conj(z)^b dV_X: zero unless a = b, else pi^d a!/(|a|+d)!
double monomial_pair_integral(const MultiIndex& a, const MultiIndex& b, int d);

ToeplitzBlock toeplitz_block(const SymbolFunction& f, const HardyBlock& B,
                             Backend backend = Backend::exact);

// Exact-backend assembly restricted to a subset of basis indices (rows and
// columns both taken from `basis`).  For symbols invariant under a weighted
// action this captures the full operator on that isotype.
CMat toeplitz_sub_block(const SymbolFunction& f, const HardyBlock& B,
                        const std::vector<int>& basis,
                        double* herm_defect = nullptr);

}  // namespace twl
