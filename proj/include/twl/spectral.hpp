#pragma once
// Spectra of Toeplitz blocks, isotype by isotype; counting functions;
// smoothed traces and smoothed projector kernels with certified truncation.
//
// The eigenvalue ladder is indexed by (k, varpi): for each degree k up to
// k_max the Hermitian block k P M_f P is restricted to each occurring
// isotype and densely diagonalized.  Every decomposition carries a verified
// residual ||T v - lambda v|| <= 1e-10 ||T||.  Smoothed sums include every
// block whose cutoff weight could exceed the certified tail level and report
// the bound on what was left out.

#include <optional>

#include "twl/cutoff.hpp"
#include "twl/symbol.hpp"
#include "twl/symmetry.hpp"
#include "twl/toeplitz.hpp"

namespace twl {

struct SpectralSubBlock {
  int k = 0;
  bool has_varpi = false;
  int varpi = 0;
  std::vector<MultiIndex> alphas;  // monomial basis of this isotype
  RVec log_norm2;                  // matching norms for evaluation
  RVec evals;                      // ascending
  CMat evecs;                      // columns; 0 x 0 when vectors are skipped
  double resid = 0.0;              // max eigenpair residual / ||T||
};

struct SpectrumRecord {
  std::string symbol_text;
  Weights weights;  // empty = no action
  int d = 0;
  int k_max = 0;
  bool with_vectors = true;
  double fmin = 0.0, fmax = 0.0;  // symbol range used for guards
  bool bounds_exact = false;
  double max_resid = 0.0;
  std::vector<SpectralSubBlock> blocks;  // sorted by (k, varpi)
};

// Dense spectra for all k <= k_max.  `p` empty means no action (one sub-block
// per k).  jobs = 0 uses the hardware concurrency; results are identical for
// every jobs value.
SpectrumRecord compute_spectrum(const SymbolFunction& f, const Weights& p,
                                int d, int k_max, int jobs = 0,
                                bool with_vectors = true);

struct CountingQuery {
  double lambda = 0.0;
  std::optional<int> varpi;
};

// #{(j, k, varpi-matching) : lambda_j <= lambda}; errors when lambda exceeds
// the completeness bound k_max * fmin.
long counting(const SpectrumRecord& rec, const CountingQuery& q);

// sum_j chat(lambda - lambda_j) over the matching isotype ladder, with the
// certified bound on omitted terms written to *trunc_err when non-null.
double smoothed_trace(const SpectrumRecord& rec, const GoodCutoff& cutoff,
                      double lambda, std::optional<int> varpi,
                      double* trunc_err = nullptr);

// sum_j chat(lambda - lambda_j) e_j(x1) conj(e_j(x2)); requires vectors.
cplx smoothed_kernel(const SpectrumRecord& rec, const GoodCutoff& cutoff,
                     double lambda, std::optional<int> varpi,
                     const AmbientPoint& x1, const AmbientPoint& x2,
                     double* trunc_err = nullptr);

// integral over (-inf, lambda] of the smoothed trace, computed termwise from
// the cutoff's cumulative transform (for Tauberian comparisons)
double smoothed_trace_cumulative(const SpectrumRecord& rec,
                                 const GoodCutoff& cutoff, double lambda,
                                 std::optional<int> varpi);

// least-squares (exponent, constant multiplier) of N(lambda) ~ C lambda^a
// from log-log regression over the grid
std::pair<double, double> weyl_fit(const SpectrumRecord& rec,
                                   const std::vector<double>& lambdas,
                                   std::optional<int> varpi);

// certified bound on the window mass carried by eigenvalues above level k_max:
// per level k > k_max all eigenvalues exceed k*fmin, the window there is below
// min(envelope, ipp_bound/s^4), and the level holds C(k+d, d) states (times
// the reproducing-kernel diagonal factor when kernel_weighted)
double spectral_tail_bound(const GoodCutoff& cutoff, double lambda,
                           double fmin, int k_max, int d,
                           bool kernel_weighted);

}  // namespace twl
