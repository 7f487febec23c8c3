#include "twl/geometry.hpp"

#include <cmath>

namespace twl {

double log_factorial(int n) {
  require(n >= 0, ErrorCode::precondition, "log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_multi_factorial(const MultiIndex& a) {
  double s = 0.0;
  for (int v : a) s += log_factorial(v);
  return s;
}

int multi_abs(const MultiIndex& a) {
  int s = 0;
  for (int v : a) {
    require(v >= 0, ErrorCode::precondition, "multi_abs: negative entry");
    s += v;
  }
  return s;
}

std::vector<MultiIndex> multi_indices(int k, int nvars) {
  require(k >= 0 && nvars >= 1, ErrorCode::precondition,
          "multi_indices: need k >= 0 and at least one variable");
  std::vector<MultiIndex> out;
  MultiIndex cur(nvars, 0);
  // lexicographically decreasing in the leading entries
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == nvars - 1) {
      cur[pos] = rem;
      out.push_back(cur);
      return;
    }
    for (int v = rem; v >= 0; --v) {
      cur[pos] = v;
      rec(pos + 1, rem - v);
    }
  };
  rec(0, k);
  return out;
}

double SplitMix64::normal() {
  // Box-Muller from two fresh uniforms; second value intentionally unused.
  double u1 = uniform();
  double u2 = uniform();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

CVec SplitMix64::cnormal(int n) {
  CVec v(n);
  for (int j = 0; j < n; ++j) {
    double re = normal();
    double im = normal();
    v[j] = cplx(re, im);
  }
  return v;
}

// ---------------------------------------------------------------------------

AmbientPoint make_point(const CVec& z) {
  require(z.size() >= 2, ErrorCode::precondition,
          "make_point: ambient dimension must be at least 2");
  require(std::abs(z.norm() - 1.0) <= 1e-12, ErrorCode::precondition,
          "make_point: vector is not on the unit sphere");
  return AmbientPoint{z};
}

AmbientPoint normalize_point(const CVec& z) {
  double n = z.norm();
  require(n > 1e-14, ErrorCode::precondition,
          "normalize_point: vector too close to the origin");
  return AmbientPoint{z / n};
}

TangentVectorX make_tangent(const AmbientPoint& x, const CVec& v) {
  require(v.size() == x.z.size(), ErrorCode::precondition,
          "make_tangent: dimension mismatch");
  double r = redot(v, x.z);
  require(std::abs(r) <= 1e-12 * (1.0 + v.norm()), ErrorCode::precondition,
          "make_tangent: vector has a radial component");
  return TangentVectorX{v, x};
}

TangentVectorX project_tangent(const AmbientPoint& x, const CVec& v) {
  CVec t = v - redot(v, x.z) * x.z;
  return TangentVectorX{t, x};
}

double contact_form(const TangentVectorX& v) {
  return contact_form_raw(v.base.z, v.v);
}

CVec horizontal_part(const AmbientPoint& x, const CVec& v) {
  return v - herm(v, x.z) * x.z;
}

// ---------------------------------------------------------------------------

AmbientPoint HeisenbergChart::point(double theta, const CVec& w) const {
  require(w.size() == center.d(), ErrorCode::precondition,
          "chart point: w must have d components");
  double wn = w.norm();
  require(wn < radius, ErrorCode::precondition,
          "chart point: w outside the chart radius");
  CVec lift(center.z.size());
  lift[0] = 1.0;
  lift.tail(w.size()) = w;
  CVec z = std::polar(1.0, theta) / std::sqrt(1.0 + wn * wn) * (U * lift);
  return AmbientPoint{z};
}

std::pair<double, CVec> HeisenbergChart::coords(const AmbientPoint& y) const {
  CVec c = U.adjoint() * y.z;
  double c0 = std::abs(c[0]);
  // |c_0| = 1/sqrt(1+||w||^2) > 1/sqrt(2) on the chart domain
  require(c0 > 1.0 / std::sqrt(2.0) - 1e-12, ErrorCode::precondition,
          "chart coords: point outside the chart domain");
  double theta = std::arg(c[0]);
  CVec w = c.tail(c.size() - 1) / c[0];
  return {theta, w};
}

CVec HeisenbergChart::frame(const CVec& a) const {
  require(a.size() == center.d(), ErrorCode::precondition,
          "chart frame: dimension mismatch");
  CVec lift = CVec::Zero(center.z.size());
  lift.tail(a.size()) = a;
  return U * lift;
}

CVec HeisenbergChart::chart_vec(const CVec& h) const {
  CVec c = U.adjoint() * h;
  require(std::abs(c[0]) <= 1e-8 * (1.0 + h.norm()), ErrorCode::precondition,
          "chart_vec: input is not horizontal at the center");
  return c.tail(c.size() - 1);
}

HeisenbergChart heisenberg_chart(const AmbientPoint& x) {
  int n = static_cast<int>(x.z.size());
  CMat U(n, n);
  U.col(0) = x.z;
  int filled = 1;
  // Gram-Schmidt over the standard basis in order, skipping near-dependent
  // candidates; deterministic for every center.
  for (int j = 0; j < n && filled < n; ++j) {
    CVec cand = CVec::Zero(n);
    cand[j] = 1.0;
    for (int c = 0; c < filled; ++c) cand -= U.col(c).dot(cand) * U.col(c);
    double nn = cand.norm();
    if (nn > 1e-8) {
      U.col(filled++) = cand / nn;
    }
  }
  require(filled == n, ErrorCode::numeric,
          "heisenberg_chart: frame completion failed");
  return HeisenbergChart{x, U, 1.0};
}

// ---------------------------------------------------------------------------

TangentSplit tangent_split(const AmbientPoint& x, const CVec& v,
                           const Weights& p) {
  require(std::abs(action_level(p, x.z)) <= 1e-8, ErrorCode::precondition,
          "tangent_split: base point is not on the zero locus");
  CVec xi = horizontal_part(x, action_generator(p, x.z));
  double xin = xi.norm();
  require(xin > 1e-10, ErrorCode::precondition,
          "tangent_split: degenerate action (vanishing generator)");
  CVec h = horizontal_part(x, v);
  require((h - v).norm() <= 1e-8 * (1.0 + v.norm()), ErrorCode::precondition,
          "tangent_split: input vector is not horizontal");
  TangentSplit s;
  s.base = x;
  s.ver_dir = xi / xin;
  s.trasv_dir = cplx(0.0, 1.0) * s.ver_dir;
  s.ver = RVec::Constant(1, redot(v, s.ver_dir));
  s.trasv = RVec::Constant(1, redot(v, s.trasv_dir));
  s.hor = v - s.ver[0] * s.ver_dir - s.trasv[0] * s.trasv_dir;
  return s;
}

double dist_to_zero_locus(const AmbientPoint& x, const Weights& p) {
  int pmax = 0;
  for (int w : p) pmax = std::max(pmax, std::abs(w));
  require(pmax > 0, ErrorCode::precondition,
          "dist_to_zero_locus: trivial action");
  return std::abs(action_level(p, x.z)) / (2.0 * pmax);
}

// ---------------------------------------------------------------------------

CMat fs_pairing(const CVec& w) {
  int d = static_cast<int>(w.size());
  double s = 1.0 + w.squaredNorm();
  CMat H(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      H(j, k) = ((j == k ? s : 0.0) - std::conj(w[j]) * w[k]) / (s * s);
  return H;
}

static cplx fs_form(const CVec& w, const CVec& a, const CVec& b) {
  CMat H = fs_pairing(w);
  cplx acc = 0.0;
  for (int j = 0; j < w.size(); ++j)
    for (int k = 0; k < w.size(); ++k)
      acc += H(j, k) * a[j] * std::conj(b[k]);
  return acc;
}

double fs_omega(const CVec& w, const CVec& a, const CVec& b) {
  return -fs_form(w, a, b).imag();
}

double fs_metric(const CVec& w, const CVec& a, const CVec& b) {
  return fs_form(w, a, b).real();
}

// ---------------------------------------------------------------------------

QuadratureRule1D gauss_legendre_unit(int n) {
  require(n >= 1, ErrorCode::precondition, "gauss_legendre_unit: n >= 1");
  // Golub-Welsch on the Jacobi matrix for Legendre polynomials on [-1, 1].
  RMat J = RMat::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(J);
  QuadratureRule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = 0.5 * (es.eigenvalues()[i] + 1.0);  // map to [0, 1]
    double v0 = es.eigenvectors()(0, i);
    r.weights[i] = v0 * v0;  // already sums to 1 on the unit interval
  }
  return r;
}

void sphere_nodes(int d, int n_simplex, int n_phi,
                  const std::function<void(const CVec&, double)>& visit) {
  require(d >= 1 && n_simplex >= 1 && n_phi >= 1, ErrorCode::precondition,
          "sphere_nodes: bad rule sizes");
  QuadratureRule1D gl = gauss_legendre_unit(n_simplex);
  double dphi = kTwoPi / n_phi;

  std::vector<double> w(d + 1, 0.0);
  std::vector<double> phi(d, 0.0);
  CVec z(d + 1);

  // Duffy-type recursion over the simplex: w_j = u_j * (remaining mass).
  std::function<void(int, double, double)> simplex_rec = [&](int pos,
                                                             double rem,
                                                             double wt) {
    if (pos == d) {
      w[0] = rem;
      // torus loop over phi_1..phi_d (phi_0 = 0, phase integral = 2 pi)
      std::function<void(int, double)> torus_rec = [&](int t, double twt) {
        if (t == d) {
          z[0] = std::sqrt(std::max(w[0], 0.0));
          for (int j = 1; j <= d; ++j)
            z[j] = std::sqrt(std::max(w[j], 0.0)) *
                   std::polar(1.0, phi[j - 1]);
          visit(z, twt);
          return;
        }
        for (int i = 0; i < n_phi; ++i) {
          phi[t] = i * dphi;
          torus_rec(t + 1, twt * dphi);
        }
      };
      // measure factor: (1/2 pi) alpha wedge ... gives (1/2^d) dw dphi after
      // integrating the overall phase
      torus_rec(0, wt / std::pow(2.0, d));
      return;
    }
    for (int i = 0; i < n_simplex; ++i) {
      double u = gl.nodes[i];
      w[pos + 1] = u * rem;
      simplex_rec(pos + 1, rem * (1.0 - u), wt * gl.weights[i] * rem);
    }
  };
  simplex_rec(0, 1.0, 1.0);
}

double sphere_integral(int d, int n_simplex, int n_phi,
                       const std::function<double(const CVec&)>& f) {
  double acc = 0.0;
  sphere_nodes(d, n_simplex, n_phi,
               [&](const CVec& z, double wt) { acc += wt * f(z); });
  return acc;
}

double simplex_monomial_integral(const MultiIndex& a) {
  int d = static_cast<int>(a.size());
  return std::exp(log_multi_factorial(a) - log_factorial(multi_abs(a) + d));
}

}  // namespace twl
