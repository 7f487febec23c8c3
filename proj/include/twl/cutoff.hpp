#pragma once
// Smooth compactly supported cutoff machinery.  The generator is the bump
//   gamma(t) ∝ exp(-1/(1 - u^2)),  u = 2t/eps,  supported on (-eps/2, eps/2),
// L^2-normalized on a fixed trapezoid grid.  The spectral weight is
//   chi = gamma * gamma~  (autocorrelation), so chi(0) = 1 exactly under the
// same grid rule, and its transform chat(s) = |gammahat(s)|^2 is nonnegative
// with integral 2 pi.  chat is tabulated on a uniform grid of spacing eps/400
// out to a certified tail: past lambda_tail the running envelope stays below
// 1e-12 of the peak.  Evaluation interpolates cubically; the envelope is a
// monotone majorant used for truncation certificates.

#include <map>
#include <memory>

#include "twl/common.hpp"

namespace twl {

struct GoodCutoff {
  double eps = 0.0;
  double dt = 0.0;       // gamma sample spacing on [0, eps/2]
  RVec gamma_half;       // normalized gamma at t_i = i dt (even extension)
  double ds = 0.0;       // chat grid spacing, eps/400
  RVec chat_grid;        // chat at s_j = j ds, j >= 0 (even in s)
  RVec envelope_grid;    // suffix maxima of chat_grid
  RVec cumulative_half;  // int_0^{s_j} chat
  double chat0 = 0.0;
  double chi_norm = 1.0;     // raw autocorrelation at 0; chi divides by this
  double total = 0.0;        // int chat over the line (= 2 pi up to grid error)
  double lambda_tail = 0.0;  // certified: envelope(s) <= 1e-12 chat0 beyond
  // integration-by-parts constant: chat(s) <= ipp_bound / s^4 for all s != 0
  // (|gammahat| <= ||gamma''||_L1 / s^2, squared, with a 1.21 safety factor on
  // the finite-difference L1 norm)
  double ipp_bound = 0.0;

  double chi(double t) const;  // chi(0) == 1.0 exactly (ratio of identical
                               // grid sums)
  double chi_raw(double t) const;  // unnormalized autocorrelation
  double chat(double s) const;
  // monotone majorant of chat on |s'| >= |s|; never returns zero inside or
  // beyond the table (conservative for truncation bounds)
  double chat_envelope(double s) const;
  double cumulative_at(double s) const;  // int_{-inf}^{s} chat
};

// jobs = 0 picks the hardware concurrency; the result is bit-identical for
// every jobs value (fixed work decomposition).
GoodCutoff good_cutoff(double eps, int jobs = 0);

// process-wide memoized table per eps value
const GoodCutoff& shared_cutoff(double eps, int jobs = 0);

}  // namespace twl
