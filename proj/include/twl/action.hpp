#pragma once
// Weighted circle action on the ambient sphere: phi . z = diag(e^{i p_j phi}) z.
// The infinitesimal generator at z is xi(z) = i diag(p) z; it is tangent to the
// sphere and its contact pairing alpha(xi) equals sum_j p_j |z_j|^2.

#include "twl/common.hpp"

namespace twl {

using Weights = std::vector<int>;

inline CVec action_generator(const Weights& p, const CVec& z) {
  require(static_cast<int>(p.size()) == z.size(), ErrorCode::precondition,
          "action_generator: weight count must match ambient dimension");
  CVec out(z.size());
  for (int j = 0; j < z.size(); ++j)
    out[j] = cplx(0.0, static_cast<double>(p[j])) * z[j];
  return out;
}

inline CVec action_rotate(const Weights& p, double phi, const CVec& z) {
  require(static_cast<int>(p.size()) == z.size(), ErrorCode::precondition,
          "action_rotate: weight count must match ambient dimension");
  CVec out(z.size());
  for (int j = 0; j < z.size(); ++j)
    out[j] = std::polar(1.0, p[j] * phi) * z[j];
  return out;
}

// Raw fixed-level function sum_j p_j |z_j|^2 (sign-free; the symmetry module
// attaches the sign that makes it the moment map for our conventions).
inline double action_level(const Weights& p, const CVec& z) {
  double s = 0.0;
  for (int j = 0; j < z.size(); ++j) s += p[j] * std::norm(z[j]);
  return s;
}

}  // namespace twl
