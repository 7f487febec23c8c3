#pragma once
// Conformal contact dynamics for a positive (possibly fiber-dependent)
// multiplier function on the sphere: the generating vector field, adaptive
// flow integration, and finite-difference verification of the transport
// identities.  The field is
//     upsilon = upsilon_h - varsigma(x) * (i z),
// where upsilon_h is the horizontal dual of the horizontal differential of
// varsigma against twice the curvature pairing; the overall sign is pinned at
// first use by an algebraic self-test (Cartan identity on horizontal test
// vectors).

#include <string>

#include "twl/geometry.hpp"
#include "twl/symbol.hpp"

namespace twl {

// Positive function on the sphere; fiber-dependent atoms are allowed.
struct FiberSymbol {
  SymbolFunction fn;
  double lower = 0.0;  // sampled positive lower bound

  double operator()(const AmbientPoint& x) const { return fn.eval(x.z); }
};

// Parses and checks sampled positivity on the sphere of the ambient dimension
// the expression references (at least 2 coordinates).
FiberSymbol make_fiber_symbol(const std::string& text, int d);

struct FlowState {
  AmbientPoint x;
  double tau = 0.0;
};

// generating field at x; alpha(upsilon) = -varsigma(x) by construction
TangentVectorX contact_field(const FiberSymbol& s, const AmbientPoint& x);

// fiber derivative d/dt varsigma(e^{it} x) at t = 0
double theta_derivative(const FiberSymbol& s, const AmbientPoint& x);

// Adaptive 4th/5th-order Runge-Kutta with step doubling; local error target
// `tol`, sphere renormalization each accepted step.  Pre: |tau| <= 10.
FlowState flow(const FiberSymbol& s, const AmbientPoint& x0, double tau,
               double tol = 1e-10);

// Finite-difference residuals of the three transport identities at x:
//   transport:  d/ds [alpha(d phi_s v)]|_0 = -theta_derivative * alpha(v)
//   derivative: upsilon(varsigma) = -varsigma * theta_derivative
//   conformal:  d/ds [alpha(d phi_s v) / varsigma(phi_s x)]|_0 = 0
// maximized over a deterministic set of tangent vectors.
struct LieReport {
  double transport_resid = 0.0;
  double derivative_resid = 0.0;
  double conformal_resid = 0.0;
  bool pass = false;  // all residuals < 1e-6
};
LieReport lie_identities_check(const FiberSymbol& s, const AmbientPoint& x);

// Integrates the variational equation alongside the flow and compares
// alpha(d phi_tau v) with [varsigma(phi_tau x)/varsigma(x)] alpha(v) over a
// deterministic set of tangent vectors.
struct PullbackReport {
  double resid = 0.0;
  double factor = 0.0;  // varsigma(phi_tau x) / varsigma(x)
  bool pass = false;    // resid < 1e-6
};
PullbackReport pullback_check(const FiberSymbol& s, const AmbientPoint& x,
                              double tau);

}  // namespace twl
