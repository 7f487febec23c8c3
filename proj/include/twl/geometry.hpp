#pragma once
// Model geometry: the unit sphere X = S^{2d+1} in C^{d+1} as a circle bundle
// over projective space M = CP^d, with contact form
//     alpha_x(v) = Re<v, i z>,
// Fubini-Study data normalized so d(alpha) = 2 pi^*(omega) and the line
// integral of omega over a projective line is pi.  The measure on X is
// dV_X = (1/2pi) alpha ^ pi^* dV_M, total mass pi^d / d!.

#include <functional>

#include "twl/action.hpp"
#include "twl/common.hpp"

namespace twl {

// Global phase convention relating the flat symplectic pairing to the complex
// structure; modulus identities are independent of it, phase identities use it.
inline constexpr double kOmegaSign = 1.0;

struct AmbientPoint {
  CVec z;
  int d() const { return static_cast<int>(z.size()) - 1; }
};

// Validates ||z|| = 1 within 1e-12.
AmbientPoint make_point(const CVec& z);
// Projects to the sphere first (used to build nearby points in tests/flows).
AmbientPoint normalize_point(const CVec& z);

struct TangentVectorX {
  CVec v;
  AmbientPoint base;
};

// Validates Re<v, z> = 0 within 1e-12 * (1 + ||v||).
TangentVectorX make_tangent(const AmbientPoint& x, const CVec& v);
// Removes the radial component of an arbitrary ambient vector.
TangentVectorX project_tangent(const AmbientPoint& x, const CVec& v);

double contact_form(const TangentVectorX& v);
inline double contact_form_raw(const CVec& z, const CVec& v) {
  // alpha_x(v) = Re<v, i z> = Im<v, z>
  return herm(v, z).imag();
}

// Component of v complex-orthogonal to z (kills both radial and fiber parts).
CVec horizontal_part(const AmbientPoint& x, const CVec& v);

// -------------------------------------------------------------------------
// Heisenberg local chart centered at x:
//   point(theta, w) = e^{i theta} U (1, w) / sqrt(1 + ||w||^2),  ||w|| < 1,
// where the unitary frame U maps e_0 to the center.  Fiber rotation is
// translation in theta; w is a unitary coordinate at the center; the pulled
// back contact form along the section theta = 0 is Im<a, w>/(1 + ||w||^2),
// whose linearization at 0 matches the potential A_j = -(i/2) conj(w_j).
struct HeisenbergChart {
  AmbientPoint center;
  CMat U;
  double radius = 1.0;

  AmbientPoint point(double theta, const CVec& w) const;
  // Inverse on the chart domain; returns (theta, w).
  std::pair<double, CVec> coords(const AmbientPoint& y) const;
  // Derivative of w -> point(0, w) at w = 0 in direction a: equals U (0, a).
  CVec frame(const CVec& a) const;
  // Chart components of a horizontal ambient vector h at the center.
  CVec chart_vec(const CVec& h) const;
};

HeisenbergChart heisenberg_chart(const AmbientPoint& x);

// -------------------------------------------------------------------------
// Splitting of a horizontal vector at a lift of m in the zero locus of the
// action level function: component along the generator direction (ver),
// along its rotation by the complex structure (trasv), and the complex
// complement (hor).  Directions are unit vectors in the ambient space.
struct TangentSplit {
  AmbientPoint base;
  CVec ver_dir;    // xi_M(m)/||xi_M(m)||
  CVec trasv_dir;  // i * ver_dir
  RVec ver;        // length 1: coefficient along ver_dir
  RVec trasv;      // length 1: coefficient along trasv_dir
  CVec hor;        // remainder, complex-orthogonal to ver_dir

  CVec total() const { return ver[0] * ver_dir + trasv[0] * trasv_dir + hor; }
};

// Pre: |action level at base| <= 1e-8 and v horizontal at base.
TangentSplit tangent_split(const AmbientPoint& x, const CVec& v,
                           const Weights& p);

// Distance proxy to the zero locus: |level(z)| / (2 max_j |p_j|); vanishes on
// the locus and is two-sided comparable to the true distance near it.
double dist_to_zero_locus(const AmbientPoint& x, const Weights& p);

// -------------------------------------------------------------------------
// Fubini-Study data in the affine chart w in C^d covering [1 : w]:
//   h_{jk}(w) = [ delta_{jk} (1 + ||w||^2) - conj(w_j) w_k ] / (1 + ||w||^2)^2
// with omega(a, b) = -Im sum h_{jk} a_j conj(b_k) and the metric its real part.
CMat fs_pairing(const CVec& w);
double fs_omega(const CVec& w, const CVec& a, const CVec& b);
double fs_metric(const CVec& w, const CVec& a, const CVec& b);

// -------------------------------------------------------------------------
// Quadrature on the sphere for functions invariant under the overall phase.
// Coordinates: simplex weights w_1..w_d (w_0 = 1 - sum) and torus angles,
// z_j = sqrt(w_j) e^{i phi_j} with phi_0 = 0; the phase integral contributes
// the explicit factor 2 pi.  Visit weights sum to vol(X) = pi^d / d!.
struct QuadratureRule1D {
  RVec nodes;    // in (0, 1)
  RVec weights;  // positive, sum 1
};
QuadratureRule1D gauss_legendre_unit(int n);

void sphere_nodes(int d, int n_simplex, int n_phi,
                  const std::function<void(const CVec&, double)>& visit);

// Convenience: integral of f dV_X for phase-invariant f.
double sphere_integral(int d, int n_simplex, int n_phi,
                       const std::function<double(const CVec&)>& f);

// Integral over the standard d-simplex of prod w_j^{a_j} dw equals
// prod a_j! / (|a| + d)!; used as the quadrature oracle in tests.
double simplex_monomial_integral(const MultiIndex& a);

}  // namespace twl
