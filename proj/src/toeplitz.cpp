#include "twl/toeplitz.hpp"

#include <cmath>

namespace twl {

double monomial_pair_integral(const MultiIndex& a, const MultiIndex& b, int d) {
  require(static_cast<int>(a.size()) <= d + 1 &&
              static_cast<int>(b.size()) <= d + 1,
          ErrorCode::precondition,
          "monomial_pair_integral: index longer than the coordinate count");
  MultiIndex ap = a, bp = b;
  ap.resize(d + 1, 0);
  bp.resize(d + 1, 0);
  if (ap != bp) return 0.0;
  return std::exp(d * std::log(kPi) + log_multi_factorial(ap) -
                  log_factorial(multi_abs(ap) + d));
}

namespace {

// alpha_col + mu - nu, padded to d+1; empty result when any entry is negative
bool shifted_index(const MultiIndex& alpha, const SymbolTerm& t, int d,
                   MultiIndex& out) {
  out.assign(d + 1, 0);
  for (size_t j = 0; j < alpha.size(); ++j) out[j] = alpha[j];
  for (size_t j = 0; j < t.mu.size(); ++j) {
    out[j] += t.mu[j] - t.nu[j];
    if (out[j] < 0) return false;
  }
  return true;
}

// entry <f s_col, s_row> for row = alpha_col + mu - nu:
//   sum_t c_t * I(alpha_col + mu) / sqrt(n_row n_col)
CMat assemble_exact(const SymbolFunction& f, const HardyBlock& B,
                    const std::vector<int>& basis) {
  int n = static_cast<int>(basis.size());
  CMat M = CMat::Zero(n, n);
  std::vector<int> pos(B.dim(), -1);
  for (int i = 0; i < n; ++i) pos[basis[i]] = i;

  MultiIndex target, big;
  for (int cj = 0; cj < n; ++cj) {
    const MultiIndex& alpha = B.alphas[basis[cj]];
    for (const auto& t : f.terms()) {
      if (!shifted_index(alpha, t, B.d, target)) continue;
      if (multi_abs(target) != B.k) continue;  // mu/nu imbalance leaves H_k
      int row_full = B.index_of(target);
      if (row_full < 0) continue;
      int ri = pos[row_full];
      require(ri >= 0, ErrorCode::precondition,
              "toeplitz sub-block: symbol couples the chosen basis to "
              "monomials outside it");
      // I(alpha + mu) with the shared exponent alpha + mu = target + nu
      big.assign(B.d + 1, 0);
      for (size_t j = 0; j < alpha.size(); ++j) big[j] = alpha[j];
      for (size_t j = 0; j < t.mu.size(); ++j) big[j] += t.mu[j];
      double logI = B.d * std::log(kPi) + log_multi_factorial(big) -
                    log_factorial(multi_abs(big) + B.d);
      double scale = std::exp(logI - 0.5 * B.log_norm2[row_full] -
                              0.5 * B.log_norm2[basis[cj]]);
      M(ri, cj) += t.c * scale;
    }
  }
  return M;
}

CMat assemble_quadrature(const SymbolFunction& f, const HardyBlock& B) {
  int n = B.dim();
  CMat M = CMat::Zero(n, n);
  int n_simplex = B.k + f.total_degree() + 2;
  int n_phi = 2 * B.k + 2 * f.phase_degree() + 2;
  sphere_nodes(B.d, n_simplex, n_phi, [&](const CVec& z, double wt) {
    // entry (i,j) of the matrix is int f s_j conj(s_i), so accumulate
    // conj(s) conj(s)^H rather than s s^H
    CVec s = evaluate_all(B, z).conjugate();
    M.selfadjointView<Eigen::Lower>().rankUpdate(s, wt * f.eval(z));
  });
  CMat full = M.selfadjointView<Eigen::Lower>();
  return full;
}

}  // namespace

ToeplitzBlock toeplitz_block(const SymbolFunction& f, const HardyBlock& B,
                             Backend backend) {
  require(f.min_ambient_vars() <= B.d + 1, ErrorCode::precondition,
          "toeplitz_block: symbol references coordinates beyond C^{d+1}");
  require(f.fiber_invariant(), ErrorCode::precondition,
          "toeplitz_block: symbol must be invariant under the overall phase "
          "(fiber-dependent atoms have no Toeplitz compression here)");
  std::vector<int> all(B.dim());
  for (int i = 0; i < B.dim(); ++i) all[i] = i;
  CMat M = (backend == Backend::exact) ? assemble_exact(f, B, all)
                                       : assemble_quadrature(f, B);
  ToeplitzBlock out;
  out.k = B.k;
  double scale = std::max(1.0, M.norm());
  out.herm_defect = (M - M.adjoint()).norm() / scale;
  require(out.herm_defect < 1e-8, ErrorCode::numeric,
          "toeplitz_block: assembled matrix is far from Hermitian");
  out.T = 0.5 * static_cast<double>(B.k) * (M + M.adjoint());
  return out;
}

CMat toeplitz_sub_block(const SymbolFunction& f, const HardyBlock& B,
                        const std::vector<int>& basis, double* herm_defect) {
  require(f.min_ambient_vars() <= B.d + 1, ErrorCode::precondition,
          "toeplitz_sub_block: symbol references coordinates beyond C^{d+1}");
  require(f.fiber_invariant(), ErrorCode::precondition,
          "toeplitz_sub_block: symbol must be invariant under the overall "
          "phase");
  CMat M = assemble_exact(f, B, basis);
  double scale = std::max(1.0, M.norm());
  double defect = (M - M.adjoint()).norm() / scale;
  if (herm_defect) *herm_defect = defect;
  require(defect < 1e-8, ErrorCode::numeric,
          "toeplitz_sub_block: assembled matrix is far from Hermitian");
  return 0.5 * static_cast<double>(B.k) * (M + M.adjoint());
}

}  // namespace twl
