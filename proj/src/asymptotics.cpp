#include "twl/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "twl/hardy.hpp"

namespace twl {
namespace {

bool trivial_weights(const Weights& p) {
  return p.empty() ||
         std::all_of(p.begin(), p.end(), [](int w) { return w == 0; });
}

void check_symbol(const SymbolFunction& f, const Weights& p, int d) {
  require(f.fiber_invariant(), ErrorCode::precondition,
          "asymptotics: symbol must be fiber-invariant");
  require(f.min_ambient_vars() <= d + 1, ErrorCode::precondition,
          "asymptotics: symbol references more coordinates than the model");
  auto b = f.bounds_on_sphere(d);
  require(b.lo > 0.0, ErrorCode::precondition,
          "asymptotics: symbol must be positive on the sphere");
  if (!trivial_weights(p))
    require(f.invariant_under(p), ErrorCode::precondition,
            "asymptotics: symbol must be invariant under the action");
}

// circle parametrization of the reduced locus for a mixed-sign weight pair
struct ReducedCircle {
  double c0, c1;  // |z_0|, |z_1|
  AmbientPoint at(double psi) const {
    CVec z(2);
    z[0] = c0;
    z[1] = c1 * std::exp(cplx(0.0, psi));
    return make_point(z);
  }
};

ReducedCircle reduced_circle(const Weights& p) {
  require(p.size() == 2, ErrorCode::precondition,
          "reduced locus parametrization needs d = 1");
  require(p[0] * p[1] < 0, ErrorCode::precondition,
          "reduced locus is empty or degenerate: weights must have mixed "
          "signs");
  double c0sq = static_cast<double>(p[1]) / static_cast<double>(p[1] - p[0]);
  ReducedCircle rc;
  rc.c0 = std::sqrt(c0sq);
  rc.c1 = std::sqrt(1.0 - c0sq);
  return rc;
}

double circle_trapezoid(int n, const std::function<double(double)>& g) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += g(kTwoPi * i / n);
  return acc * kTwoPi / n;
}

int count_signature(const RMat& M) {
  Eigen::SelfAdjointEigenSolver<RMat> es(M, Eigen::EigenvaluesOnly);
  const RVec& ev = es.eigenvalues();
  double thresh = 1e-10 * ev.cwiseAbs().maxCoeff();
  int plus = 0, minus = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > thresh)
      ++plus;
    else if (ev[i] < -thresh)
      ++minus;
  }
  return plus - minus;
}

}  // namespace

double gamma_integral(const SymbolFunction& f, const Weights& p, int d) {
  check_symbol(f, p, d);
  if (trivial_weights(p)) {
    // integral over the whole sphere of f^{-(d+1)}
    auto g = [&](const CVec& z) { return std::pow(f.eval(z), -(d + 1)); };
    int n1 = d == 1 ? 32 : (d == 2 ? 16 : 10);
    int nphi = 2 * n1;
    double coarse = sphere_integral(d, n1, nphi, g);
    double fine = sphere_integral(d, 2 * n1, 2 * nphi, g);
    require(std::abs(fine - coarse) <= 1e-7 * std::abs(fine),
            ErrorCode::numeric,
            "gamma_integral: sphere quadrature failed to converge");
    return fine;
  }
  make_action(p, d);  // validates the weights and the sign convention
  ReducedCircle rc = reduced_circle(p);
  auto g = [&](double psi) {
    AmbientPoint x = rc.at(psi);
    double veff = effective_volume(p, x).V_X;
    return rc.c0 * rc.c1 / (veff * f.eval(x.z));
  };
  double coarse = circle_trapezoid(256, g);
  double fine = circle_trapezoid(512, g);
  require(std::abs(fine - coarse) <= 1e-7 * std::abs(fine),
          ErrorCode::numeric,
          "gamma_integral: circle quadrature failed to converge");
  return fine;
}

double generic_amplitude(const Weights& p, int d, int varpi) {
  if (trivial_weights(p)) return 1.0;
  make_action(p, d);
  ReducedCircle rc = reduced_circle(p);
  double val = 0.0;
  bool first = true;
  for (double psi : {0.37, 1.13, 2.71, 4.63}) {
    double a = average_character(stabilizers(p, rc.at(psi)), varpi);
    if (first) {
      val = a;
      first = false;
    } else {
      require(std::abs(a - val) <= 1e-12, ErrorCode::numeric,
              "generic_amplitude: character average is not constant on the "
              "reduced locus");
    }
  }
  return val;
}

double transverse_amplitude(const SymbolFunction& f, const Weights& p,
                            const AmbientPoint& x, double dim_v) {
  check_symbol(f, p, x.d());
  double varsigma = f.eval(x.z);
  if (trivial_weights(p))
    return dim_v * std::pow(varsigma, -(x.d() + 1));
  require(dist_to_zero_locus(x, p) <= 1e-8, ErrorCode::precondition,
          "transverse_amplitude: base point must lie on the reduced locus");
  double veff = effective_volume(p, x).V_X;
  return std::sqrt(2.0) * dim_v / veff *
         std::pow(varsigma, -(x.d() + 0.5));
}

Prediction make_prediction(const SymbolFunction& f, const Weights& p, int d,
                           const AmbientPoint& x, int varpi) {
  Prediction P;
  P.d = d;
  P.e = trivial_weights(p) ? 0 : 1;
  P.gamma = gamma_integral(f, p, d);
  P.dim_v = 1.0;
  P.a_gen = generic_amplitude(p, d, varpi);
  P.at = transverse_amplitude(f, p, x, P.dim_v);
  P.varsigma = f.eval(x.z);
  require(P.gamma > 0.0 && P.at > 0.0 && P.varsigma > 0.0,
          ErrorCode::numeric, "make_prediction: nonpositive leading constant");
  return P;
}

double predicted_counting(const Prediction& P, double lambda) {
  int m = P.d - P.e + 1;
  return kPi / m * P.dim_v * P.a_gen * P.gamma * std::pow(lambda / kPi, m);
}

double predicted_trace(const Prediction& P, double lambda) {
  return kTwoPi * P.dim_v * P.a_gen * P.gamma *
         std::pow(lambda / kPi, P.d - P.e);
}

cplx q_h(const SymbolFunction& f, const AmbientPoint& x,
         const TangentSplit& s1, const TangentSplit& s2) {
  return psi2(s1.hor, s2.hor) / f.eval(x.z);
}

cplx q_vt(const SymbolFunction& f, const AmbientPoint& x,
          const TangentSplit& s1, const TangentSplit& s2) {
  // the pairing of the along-generator and rotated components reduces to the
  // product of their coefficients against unit directions
  double w1 = s1.ver[0] * s1.trasv[0];
  double w2 = s2.ver[0] * s2.trasv[0];
  double t2 = s1.trasv[0] * s1.trasv[0] + s2.trasv[0] * s2.trasv[0];
  return (cplx(0.0, 1.0) * (w1 - w2) - t2) / f.eval(x.z);
}

double predicted_kernel_diag(const Prediction& P, double wt_norm,
                             double lambda) {
  return kTwoPi * P.at * P.a_gen *
         std::pow(lambda / kPi, P.d - 0.5 * P.e) *
         std::exp(-2.0 * wt_norm * wt_norm / P.varsigma);
}

cplx predicted_kernel_offdiag(const Prediction& P, const Weights& p,
                              const AmbientPoint& x, double theta1,
                              const CVec& w1, double theta2, const CVec& w2,
                              double lambda, int varpi) {
  double varsigma = P.varsigma;
  cplx phase(0.0, std::sqrt(lambda) * (theta1 - theta2) / varsigma);
  double scale =
      kTwoPi * P.at * std::pow(lambda / kPi, P.d - 0.5 * P.e);
  if (trivial_weights(p)) {
    // free fiber: no transverse directions, the whole offset is horizontal
    return scale * std::exp(phase + psi2(w1, w2) / varsigma);
  }
  HeisenbergChart ch = heisenberg_chart(x);
  TangentSplit s1 = tangent_split(x, ch.frame(w1), p);
  TangentSplit s2 = tangent_split(x, ch.frame(w2), p);
  cplx qvt = (cplx(0.0, 1.0) * (s1.ver[0] * s1.trasv[0] -
                                s2.ver[0] * s2.trasv[0]) -
              (s1.trasv[0] * s1.trasv[0] + s2.trasv[0] * s2.trasv[0])) /
             varsigma;
  StabilizerInfo st = stabilizers(p, x);
  cplx gsum = 0.0;
  for (double ang : st.angles_X) {
    CMat A = stabilizer_jacobian(ch, p, ang);
    TangentSplit s2g = tangent_split(x, ch.frame(A * w2), p);
    cplx qh = psi2(s1.hor, s2g.hor) / varsigma;
    cplx chi = std::exp(cplx(0.0, varpi * ang));
    gsum += std::conj(chi) * std::exp(qh);
  }
  gsum /= static_cast<double>(st.order_X);
  return scale * std::exp(phase + qvt) * gsum;
}

double sigma_hat_volume(const SymbolFunction& f, const Weights& p, int d) {
  int e = trivial_weights(p) ? 0 : 1;
  int m = d - e + 1;
  return std::pow(2.0, m) * kPi / m * gamma_integral(f, p, d);
}

RMat realify(const CMat& U) {
  int n = static_cast<int>(U.rows());
  RMat R(2 * n, 2 * n);
  R.topLeftCorner(n, n) = U.real();
  R.topRightCorner(n, n) = -U.imag();
  R.bottomLeftCorner(n, n) = U.imag();
  R.bottomRightCorner(n, n) = U.real();
  return R;
}

HessianReport signature_lemma_check(const RMat& R, const RMat& S) {
  int r = static_cast<int>(R.rows());
  require(R.cols() == r && S.rows() == r && S.cols() == r,
          ErrorCode::precondition, "signature_lemma_check: shape mismatch");
  require((S - S.transpose()).cwiseAbs().maxCoeff() <=
              1e-12 * (1.0 + S.cwiseAbs().maxCoeff()),
          ErrorCode::precondition, "signature_lemma_check: S not symmetric");
  RMat C = RMat::Zero(2 * r, 2 * r);
  C.topRightCorner(r, r) = R.transpose();
  C.bottomLeftCorner(r, r) = R;
  C.bottomRightCorner(r, r) = S;
  double detR = R.determinant();
  HessianReport rep;
  rep.det_measured = C.determinant();
  rep.det_expected = (r % 2 ? -1.0 : 1.0) * detR * detR;
  rep.det_rel_err = std::abs(rep.det_measured - rep.det_expected) /
                    std::max(1e-300, std::abs(rep.det_expected));
  rep.signature = count_signature(C);
  rep.pass = rep.det_rel_err <= 1e-8 && (detR <= 0.0 || rep.signature == 0);
  return rep;
}

HessianReport hessian_upsilon_check(const RMat& A, double phi_nu) {
  int n = static_cast<int>(A.rows());
  require(A.cols() == n && n % 2 == 0, ErrorCode::precondition,
          "hessian_upsilon_check: A must be square of even size");
  require((A.transpose() * A - RMat::Identity(n, n)).cwiseAbs().maxCoeff() <=
              1e-6,
          ErrorCode::precondition,
          "hessian_upsilon_check: A must be orthogonal");
  RMat M = RMat::Zero(2 * n, 2 * n);
  M.topRightCorner(n, n) = -A.transpose();
  M.bottomLeftCorner(n, n) = -A;
  M.bottomRightCorner(n, n) = -phi_nu * RMat::Identity(n, n);
  HessianReport rep;
  rep.det_measured = M.determinant();
  rep.det_expected = 1.0;
  rep.det_rel_err = std::abs(rep.det_measured - 1.0);
  rep.signature = count_signature(M);
  rep.pass = rep.det_rel_err <= 1e-8 && rep.signature == 0;
  return rep;
}

HessianReport hessian_K_check(double varsigma, const RVec& D, const CMat& A,
                              int d, double theta1) {
  require(varsigma > 0.0, ErrorCode::precondition,
          "hessian_K_check: scale must be positive");
  require(A.rows() == d && A.cols() == d, ErrorCode::precondition,
          "hessian_K_check: A must be d x d");
  require(D.size() == 2 * d, ErrorCode::precondition,
          "hessian_K_check: D must have length 2d");
  require((A.adjoint() * A - CMat::Identity(d, d)).cwiseAbs().maxCoeff() <=
              1e-8,
          ErrorCode::precondition, "hessian_K_check: A must be unitary");
  int n = 4 + 4 * d;
  int v0 = 4, om0 = 4 + 2 * d;
  RMat Ar = realify(A);
  RMat H = RMat::Zero(n, n);
  H(0, 1) = H(1, 0) = 1.0;
  H(1, 2) = H(2, 1) = -1.0;
  H(2, 3) = H(3, 2) = varsigma;
  for (int i = 0; i < 2 * d; ++i) H(3, om0 + i) = H(om0 + i, 3) = D[i];
  for (int i = 0; i < 2 * d; ++i)
    for (int j = 0; j < 2 * d; ++j) {
      H(v0 + i, om0 + j) = -Ar(j, i) / varsigma;
      H(om0 + j, v0 + i) = -Ar(j, i) / varsigma;
    }
  for (int i = 0; i < 2 * d; ++i) H(om0 + i, om0 + i) = -theta1;

  HessianReport rep;
  rep.det_measured = H.determinant();
  rep.det_expected = std::pow(varsigma, 2 - 4 * d);
  rep.det_rel_err = std::abs(rep.det_measured - rep.det_expected) /
                    std::abs(rep.det_expected);
  rep.signature = count_signature(H);

  // closed-form inverse
  RMat M = RMat::Zero(n, n);
  M(0, 1) = M(1, 0) = 1.0;
  M(0, 3) = M(3, 0) = 1.0 / varsigma;
  M(2, 3) = M(3, 2) = 1.0 / varsigma;
  RVec AtD = Ar.transpose() * D;
  for (int i = 0; i < 2 * d; ++i) {
    M(0, v0 + i) = M(v0 + i, 0) = AtD[i];
    M(2, v0 + i) = M(v0 + i, 2) = AtD[i];
    M(v0 + i, v0 + i) = theta1 * varsigma * varsigma;
  }
  for (int i = 0; i < 2 * d; ++i)
    for (int j = 0; j < 2 * d; ++j) {
      M(v0 + i, om0 + j) = -varsigma * Ar(j, i);
      M(om0 + j, v0 + i) = -varsigma * Ar(j, i);
    }
  rep.inverse_resid =
      (H * M - RMat::Identity(n, n)).cwiseAbs().maxCoeff();
  rep.pass = rep.det_rel_err <= 1e-8 && rep.signature == 0 &&
             rep.inverse_resid <= 1e-8;
  return rep;
}

}  // namespace twl
