#pragma once
// Leading-order predictions for the spectral laboratory: the normalized
// integral Gamma over the reduced locus, power-law counting and smoothed-trace
// constants, near-diagonal kernel leading terms with their quadratic
// exponents, the rescaled-volume constant, and numeric verification of the
// three stationary-phase Hessian normal forms.

#include <optional>

#include "twl/geometry.hpp"
#include "twl/symbol.hpp"
#include "twl/symmetry.hpp"

namespace twl {

// Parameter bundle for the closed-form leading terms.  e is the orbit
// dimension (0 for the trivial action, 1 for a weighted circle action); a_gen
// is the generically constant character average on the reduced locus; at is
// the transverse amplitude at the chosen base point; varsigma is the symbol
// value there.
struct Prediction {
  int d = 0;
  int e = 0;
  double gamma = 0.0;
  double dim_v = 1.0;
  double a_gen = 1.0;
  double at = 0.0;
  double varsigma = 0.0;
};

// Gamma = integral over the reduced locus of (1/V_eff) * f^{-(d-e+1)} against
// the induced measure.  Empty/all-zero weights select the trivial action
// (e = 0, integral over the whole sphere); otherwise a mixed-sign weight pair
// in d = 1 parametrizes the locus as a circle of lifted tori.  Both branches
// run a node-doubling accuracy check.
double gamma_integral(const SymbolFunction& f, const Weights& p, int d);

// Character average at generic points of the reduced locus; errors if the
// sampled values disagree (the amplitude must be generically constant).
double generic_amplitude(const Weights& p, int d, int varpi);

// 2^{e/2} * dim_v / V_eff(x) * f(x)^{-(d + 1 - e/2)}   (V_eff = 1 when e = 0)
double transverse_amplitude(const SymbolFunction& f, const Weights& p,
                            const AmbientPoint& x, double dim_v = 1.0);

// Bundles the pieces above for a base point on the reduced locus.
Prediction make_prediction(const SymbolFunction& f, const Weights& p, int d,
                           const AmbientPoint& x, int varpi);

// pi/(d-e+1) * dim_v * a_gen * Gamma * (lambda/pi)^{d-e+1}
double predicted_counting(const Prediction& P, double lambda);

// 2 pi * dim_v * a_gen * Gamma * (lambda/pi)^{d-e}
double predicted_trace(const Prediction& P, double lambda);

// Quadratic exponents of the near-diagonal expansion, from horizontal splits
// at a base point on the reduced locus.  Real parts are never positive.
struct QuadraticExponents {
  cplx q_h;
  cplx q_vt;
};
cplx q_h(const SymbolFunction& f, const AmbientPoint& x,
         const TangentSplit& s1, const TangentSplit& s2);
cplx q_vt(const SymbolFunction& f, const AmbientPoint& x,
          const TangentSplit& s1, const TangentSplit& s2);

// 2 pi * at * a_gen * (lambda/pi)^{d-e/2} * exp(-2 wt_norm^2 / varsigma):
// the window kernel on the diagonal displaced transversally by wt_norm.
double predicted_kernel_diag(const Prediction& P, double wt_norm,
                             double lambda);

// Off-diagonal window kernel between chart offsets (theta1, w1) and
// (theta2, w2) scaled by 1/sqrt(lambda): explicit fiber phase, transverse
// Gaussian, and the stabilizer-averaged horizontal Gaussian.  For e = 1 the
// displacements must be horizontal chart vectors at a base point on the
// reduced locus.
cplx predicted_kernel_offdiag(const Prediction& P, const Weights& p,
                              const AmbientPoint& x, double theta1,
                              const CVec& w1, double theta2, const CVec& w2,
                              double lambda, int varpi);

// Volume of the rescaled coball-type region: 2^{d-e+1} pi/(d-e+1) * Gamma.
double sigma_hat_volume(const SymbolFunction& f, const Weights& p, int d);

// ---------------------------------------------------------------------------
// Stationary-phase Hessian normal forms.  Each check assembles the matrix,
// compares its determinant with the closed form, counts eigenvalue signs
// (threshold 1e-10 * max |eig|), and for the big kernel Hessian also verifies
// the closed-form inverse.  pass <=> every assertion within 1e-8.
struct HessianReport {
  double det_measured = 0.0;
  double det_expected = 0.0;
  double det_rel_err = 0.0;
  int signature = 0;
  double inverse_resid = 0.0;  // only the kernel-phase check fills this
  bool pass = false;
};

// realified complex matrix [[Re, -Im], [Im, Re]]
RMat realify(const CMat& U);

// C = [[0, R^t], [R, S]]: det C = (-1)^r det(R)^2; signature 0 when
// det R > 0.  S must be symmetric.
HessianReport signature_lemma_check(const RMat& R, const RMat& S);

// [[0, -A^t], [-A, -phi_nu I]] for realified-unitary A: det 1, signature 0.
HessianReport hessian_upsilon_check(const RMat& A, double phi_nu);

// Full (4+4d) x (4+4d) phase Hessian in coordinates
// (t, theta, r, tau, v in R^{2d}, Omega in R^{2d}): det = varsigma^{2-4d},
// signature 0, and the closed-form inverse matches numerically.
HessianReport hessian_K_check(double varsigma, const RVec& D, const CMat& A,
                              int d, double theta1 = 0.0);

}  // namespace twl
