#include "twl/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace twl {

namespace {

// deterministic generic point for the sign self-test
AmbientPoint generic_point(int d, int variant) {
  CVec z(d + 1);
  for (int j = 0; j <= d; ++j)
    z[j] = std::polar(1.0 + 0.35 * j + 0.1 * variant, 0.4 * j + 0.15 * variant);
  return normalize_point(z);
}

double level_fd(const Weights& p, const AmbientPoint& x, const CVec& v) {
  const double h = 1e-5;
  CVec plus = x.z + h * v, minus = x.z - h * v;
  return (action_level(p, (plus / plus.norm()).eval()) -
          action_level(p, (minus / minus.norm()).eval())) /
         (2.0 * h);
}

}  // namespace

CircleActionSpec make_action(const Weights& p, int d) {
  require(static_cast<int>(p.size()) == d + 1, ErrorCode::precondition,
          "make_action: need one weight per ambient coordinate");
  bool nonzero = false;
  for (int w : p) nonzero |= (w != 0);
  require(nonzero, ErrorCode::precondition, "make_action: trivial action");

  // Self-test: the sign s for which d(s * level)(v) = 2 omega0(xi_h, v_h)
  // on tangent vectors at generic points.
  double resid_plus = 0.0, resid_minus = 0.0, scale = 0.0;
  for (int variant = 0; variant < 2; ++variant) {
    AmbientPoint x = generic_point(d, variant);
    CVec xi_h = horizontal_part(x, action_generator(p, x.z));
    SplitMix64 rng(1000 + variant);
    for (int trial = 0; trial < 4; ++trial) {
      CVec v = project_tangent(x, rng.cnormal(d + 1)).v;
      double lhs = level_fd(p, x, v);
      double rhs = 2.0 * omega0(xi_h, horizontal_part(x, v));
      resid_plus = std::max(resid_plus, std::abs(lhs - rhs));
      resid_minus = std::max(resid_minus, std::abs(-lhs - rhs));
      scale = std::max(scale, std::abs(rhs));
    }
  }
  int sign = (resid_minus <= resid_plus) ? -1 : 1;
  double winner = std::min(resid_plus, resid_minus);
  require(winner <= 1e-6 * (1.0 + scale), ErrorCode::numeric,
          "make_action: moment map sign self-test failed");
  return CircleActionSpec{p, sign};
}

double moment_map(const CircleActionSpec& a, const AmbientPoint& x) {
  return a.sign * action_level(a.p, x.z);
}

int isotype_weight(const Weights& p, const MultiIndex& alpha) {
  require(alpha.size() <= p.size(), ErrorCode::precondition,
          "isotype_weight: index longer than the weight vector");
  long acc = 0;
  for (size_t j = 0; j < alpha.size(); ++j)
    acc -= static_cast<long>(p[j]) * alpha[j];
  return static_cast<int>(acc);
}

std::vector<int> isotype_weights_in_block(const HardyBlock& B,
                                          const Weights& p) {
  std::vector<int> ws;
  for (const auto& a : B.alphas) ws.push_back(isotype_weight(p, a));
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  return ws;
}

std::vector<int> isotype_basis(const HardyBlock& B, const Weights& p,
                               int varpi) {
  std::vector<int> idx;
  for (int i = 0; i < B.dim(); ++i)
    if (isotype_weight(p, B.alphas[i]) == varpi) idx.push_back(i);
  return idx;
}

StabilizerInfo stabilizers(const Weights& p, const AmbientPoint& x) {
  require(static_cast<int>(p.size()) == x.z.size(), ErrorCode::precondition,
          "stabilizers: weight count mismatch");
  std::vector<int> support;
  for (int j = 0; j < x.z.size(); ++j)
    if (std::abs(x.z[j]) > 1e-12) support.push_back(j);
  require(!support.empty(), ErrorCode::precondition,
          "stabilizers: zero point");

  // upstairs: p_j phi = 0 mod 2 pi for all j in the support
  int gx = 0;
  bool all_zero = true;
  for (int j : support) {
    if (p[j] != 0) {
      all_zero = false;
      gx = std::gcd(gx, std::abs(p[j]));
    }
  }
  require(!all_zero, ErrorCode::precondition,
          "stabilizers: the whole circle fixes this point upstairs");
  // any p_j = 0 on the support imposes no constraint; gx from the rest
  // (note: a zero weight on the support leaves the coordinate untouched)

  // downstairs: (p_j - p_l) phi = 0 mod 2 pi over the support
  int gm = 0;
  for (size_t a = 0; a < support.size(); ++a)
    for (size_t b = a + 1; b < support.size(); ++b)
      gm = std::gcd(gm, std::abs(p[support[a]] - p[support[b]]));
  if (support.size() == 1) gm = 0;
  require(gm != 0, ErrorCode::precondition,
          "stabilizers: projective fixed point (infinite stabilizer "
          "downstairs)");

  StabilizerInfo st;
  st.order_X = std::max(gx, 1);
  st.order_M = gm;
  require(st.order_M % st.order_X == 0, ErrorCode::numeric,
          "stabilizers: upstairs order must divide downstairs order");
  st.sheets = st.order_M / st.order_X;
  for (int s = 0; s < st.order_X; ++s)
    st.angles_X.push_back(kTwoPi * s / st.order_X);
  for (int s = 0; s < st.order_M; ++s)
    st.angles_M.push_back(kTwoPi * s / st.order_M);

  // direct verification of every listed element
  for (double phi : st.angles_X) {
    CVec moved = action_rotate(p, phi, x.z);
    require((moved - x.z).norm() <= 1e-10, ErrorCode::numeric,
            "stabilizers: candidate upstairs element fails verification");
  }
  for (double phi : st.angles_M) {
    CVec moved = action_rotate(p, phi, x.z);
    // common phase read from the first support coordinate
    cplx ph = moved[support[0]] / x.z[support[0]];
    ph /= std::abs(ph);
    require((moved - ph * x.z).norm() <= 1e-10, ErrorCode::numeric,
            "stabilizers: candidate downstairs element fails verification");
  }
  return st;
}

EffectiveVolumes effective_volume(const Weights& p, const AmbientPoint& x) {
  StabilizerInfo st = stabilizers(p, x);
  // ||xi_X|| and alpha(xi_X) are constant along the orbit; keep the explicit
  // orbit quadrature anyway (trapezoid, exact for constants).
  const int n = 64;
  double accX = 0.0, accM = 0.0;
  for (int i = 0; i < n; ++i) {
    double phi = kTwoPi * i / n;
    CVec z = action_rotate(p, phi, x.z);
    CVec xi = action_generator(p, z);
    double a = contact_form_raw(z, xi);
    double nx2 = xi.squaredNorm();
    accX += std::sqrt(nx2);
    accM += std::sqrt(std::max(nx2 - a * a, 0.0));
  }
  accX *= kTwoPi / n;
  accM *= kTwoPi / n;
  EffectiveVolumes ev;
  ev.V_X = accX / st.order_X;
  ev.V_M = accM / st.order_M;
  CVec xi0 = action_generator(p, x.z);
  double a0 = contact_form_raw(x.z, xi0);
  ev.detC = kTwoPi *
            std::sqrt(std::max(xi0.squaredNorm() - a0 * a0, 0.0));
  return ev;
}

double average_character(const StabilizerInfo& st, int varpi) {
  cplx acc = 0.0;
  for (double phi : st.angles_X) acc += std::polar(1.0, varpi * phi);
  acc /= static_cast<double>(st.order_X);
  require(std::abs(acc.imag()) < 1e-12, ErrorCode::numeric,
          "average_character: non-real group average");
  return acc.real();
}

CMat stabilizer_jacobian(const HeisenbergChart& ch, const Weights& p,
                         double angle) {
  int d = ch.center.d();
  // the rotation must fix the center downstairs
  CVec moved = action_rotate(p, angle, ch.center.z);
  auto [th0, w0] = ch.coords(AmbientPoint{moved});
  (void)th0;
  require(w0.norm() <= 1e-10, ErrorCode::precondition,
          "stabilizer_jacobian: rotation does not fix the chart center");

  const double h = 1e-5;
  CMat A(d, d);
  for (int j = 0; j < d; ++j) {
    CVec e = CVec::Zero(d);
    e[j] = 1.0;
    auto wp = ch.coords(AmbientPoint{action_rotate(p, angle,
                                                   ch.point(0.0, h * e).z)});
    auto wm = ch.coords(AmbientPoint{action_rotate(p, angle,
                                                   ch.point(0.0, -h * e).z)});
    A.col(j) = (wp.second - wm.second) / (2.0 * h);
  }
  require((A.adjoint() * A - CMat::Identity(d, d)).norm() <= 1e-8,
          ErrorCode::numeric,
          "stabilizer_jacobian: linearized action is not unitary");
  return A;
}

}  // namespace twl
