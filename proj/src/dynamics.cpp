#include "twl/dynamics.hpp"

#include <cmath>

namespace twl {
namespace {

constexpr double kGradH = 1e-4;

// real gradient of s as a complex vector g with ds(v) = Re<v, g>
CVec ambient_gradient(const FiberSymbol& s, const AmbientPoint& x) {
  int n = static_cast<int>(x.z.size());
  CVec g(n);
  for (int j = 0; j < n; ++j) {
    CVec zp = x.z, zm = x.z;
    zp[j] += kGradH;
    zm[j] -= kGradH;
    double dre = (s.fn.eval(normalize_point(zp).z) -
                  s.fn.eval(normalize_point(zm).z)) /
                 (2.0 * kGradH);
    zp = x.z;
    zm = x.z;
    zp[j] += cplx(0.0, kGradH);
    zm[j] -= cplx(0.0, kGradH);
    double dim = (s.fn.eval(normalize_point(zp).z) -
                  s.fn.eval(normalize_point(zm).z)) /
                 (2.0 * kGradH);
    g[j] = cplx(dre, dim);
  }
  return g;
}

CVec field_impl(const FiberSymbol& s, const AmbientPoint& x) {
  CVec g = ambient_gradient(s, x);
  CVec gh = horizontal_part(x, g);
  // horizontal dual: 2 omega(u, a) = Re<g_h, a> for horizontal a at u = -i/2 g_h
  CVec up = cplx(0.0, -0.5) * gh;
  return up - s.fn.eval(x.z) * (cplx(0.0, 1.0) * x.z);
}

double theta_derivative_impl(const FiberSymbol& s, const AmbientPoint& x) {
  const double h = kGradH;
  cplx rp = std::exp(cplx(0.0, h)), rm = std::exp(cplx(0.0, -h));
  return (s.fn.eval((rp * x.z).eval()) - s.fn.eval((rm * x.z).eval())) /
         (2.0 * h);
}

// Pins the sign of the horizontal dual with the Cartan identity
//   (L_upsilon alpha)(a) = d(alpha)(upsilon, a) - d(varsigma)(a)
// on horizontal test vectors, where the left side must equal
// -theta_derivative * alpha(a) = 0.  A sign flip doubles the gradient term.
bool run_sign_self_test() {
  FiberSymbol ref;
  ref.fn = SymbolFunction::parse("1+0.5*w1");
  ref.lower = 0.5;
  CVec z(2);
  z[0] = cplx(0.6, 0.15);
  z[1] = cplx(-0.3, 0.2);
  AmbientPoint x = normalize_point(z);
  CVec u = field_impl(ref, x);
  CVec uh = horizontal_part(x, u);
  CVec g = ambient_gradient(ref, x);
  double worst = 0.0, scale = 1e-12;
  for (int j = 0; j < 2; ++j) {
    CVec a = horizontal_part(x, CVec::Unit(2, j));
    if (a.norm() < 0.3) continue;
    double lhs = 2.0 * omega0(uh, a);
    double rhs = redot(g, a);
    worst = std::max(worst, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(rhs));
  }
  require(worst <= 1e-6 * (1.0 + scale), ErrorCode::numeric,
          "contact_field: orientation self-test failed");
  return true;
}

CVec checked_field(const FiberSymbol& s, const AmbientPoint& x) {
  static const bool ok = run_sign_self_test();
  (void)ok;
  return field_impl(s, x);
}

CVec field_ext(const FiberSymbol& s, const CVec& y) {
  return checked_field(s, normalize_point(y));
}

template <typename F>
CVec rk4_step(const F& f, const CVec& y, double h) {
  CVec k1 = f(y);
  CVec k2 = f(y + 0.5 * h * k1);
  CVec k3 = f(y + 0.5 * h * k2);
  CVec k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// adaptive integration of y' = f(y) from 0 to tau; `settle` post-processes an
// accepted state (renormalization)
template <typename F, typename S>
CVec integrate(const F& f, const S& settle, CVec y, double tau, double tol) {
  require(std::abs(tau) <= 10.0, ErrorCode::precondition,
          "flow: time bound |tau| <= 10 exceeded");
  if (tau == 0.0) return y;
  double dir = tau > 0.0 ? 1.0 : -1.0;
  double t = 0.0, H = std::min(0.05, std::abs(tau));
  while (std::abs(t) < std::abs(tau)) {
    double h = dir * std::min(H, std::abs(tau) - std::abs(t));
    CVec y1 = rk4_step(f, y, h);
    CVec y2 = rk4_step(f, rk4_step(f, y, 0.5 * h), 0.5 * h);
    double err = (y2 - y1).norm() / 15.0;
    if (err <= tol) {
      y = y2 + (y2 - y1) / 15.0;
      settle(y);
      t += h;
      H *= std::clamp(0.9 * std::pow(tol / std::max(err, 1e-18), 0.2), 0.2,
                      5.0);
    } else {
      H *= std::clamp(0.9 * std::pow(tol / err, 0.25), 0.1, 1.0);
    }
    require(H >= 1e-8, ErrorCode::numeric, "flow: step size underflow");
  }
  return y;
}

}  // namespace

FiberSymbol make_fiber_symbol(const std::string& text, int d) {
  FiberSymbol s;
  s.fn = SymbolFunction::parse(text, /*allow_fiber_dependent=*/true);
  require(s.fn.min_ambient_vars() <= d + 1, ErrorCode::precondition,
          "make_fiber_symbol: expression references more coordinates than "
          "the model");
  auto b = s.fn.bounds_on_sphere(d);
  require(b.lo > 0.0, ErrorCode::precondition,
          "make_fiber_symbol: expression must be positive on the sphere");
  s.lower = b.lo;
  return s;
}

TangentVectorX contact_field(const FiberSymbol& s, const AmbientPoint& x) {
  return make_tangent(x, checked_field(s, x));
}

double theta_derivative(const FiberSymbol& s, const AmbientPoint& x) {
  return theta_derivative_impl(s, x);
}

FlowState flow(const FiberSymbol& s, const AmbientPoint& x0, double tau,
               double tol) {
  auto f = [&](const CVec& y) { return field_ext(s, y); };
  auto settle = [](CVec& y) {
    double n = y.norm();
    require(std::abs(n - 1.0) < 1e-8, ErrorCode::numeric,
            "flow: excessive sphere drift in one step");
    y /= n;
  };
  CVec y = integrate(f, settle, x0.z, tau, tol);
  return FlowState{make_point(y), tau};
}

namespace {

// deterministic tangent test vectors at x
std::vector<CVec> tangent_samples(const AmbientPoint& x) {
  int n = static_cast<int>(x.z.size());
  std::vector<CVec> out;
  SplitMix64 rng(97531u);
  for (int t = 0; t < 4; ++t) {
    CVec raw(n);
    for (int j = 0; j < n; ++j) raw[j] = cplx(rng.normal(), rng.normal());
    CVec v = raw - redot(raw, x.z) * x.z;  // remove the radial part
    if (v.norm() > 0.3) out.push_back(v / v.norm());
  }
  return out;
}

// transported offset vector d phi_tau (v) by flowing displaced points
CVec transported(const FiberSymbol& s, const AmbientPoint& x, const CVec& v,
                 double tau, double h2) {
  AmbientPoint xp = normalize_point(x.z + h2 * v);
  AmbientPoint xm = normalize_point(x.z - h2 * v);
  CVec zp = flow(s, xp, tau).x.z;
  CVec zm = flow(s, xm, tau).x.z;
  return (zp - zm) / (2.0 * h2);
}

}  // namespace

LieReport lie_identities_check(const FiberSymbol& s, const AmbientPoint& x) {
  const double h = 1e-4, h2 = 1e-4;
  LieReport rep;
  double dtheta = theta_derivative_impl(s, x);
  double sig = s.fn.eval(x.z);

  // (derivative) upsilon(varsigma) = -varsigma * dtheta via the flow
  double sp = s.fn.eval(flow(s, x, h).x.z);
  double sm = s.fn.eval(flow(s, x, -h).x.z);
  rep.derivative_resid = std::abs((sp - sm) / (2.0 * h) + sig * dtheta);

  AmbientPoint fp = flow(s, x, h).x;
  AmbientPoint fm = flow(s, x, -h).x;
  double sfp = s.fn.eval(fp.z), sfm = s.fn.eval(fm.z);
  for (const CVec& v : tangent_samples(x)) {
    CVec tp = transported(s, x, v, h, h2);
    CVec tm = transported(s, x, v, -h, h2);
    double ap = contact_form_raw(fp.z, tp);
    double am = contact_form_raw(fm.z, tm);
    double a0 = contact_form_raw(x.z, v);
    // (transport) d/ds alpha(d phi_s v) = -dtheta * alpha(v)
    rep.transport_resid = std::max(
        rep.transport_resid, std::abs((ap - am) / (2.0 * h) + dtheta * a0));
    // (conformal) the ratio alpha/varsigma is invariant
    double cp = ap / sfp, cm = am / sfm;
    rep.conformal_resid =
        std::max(rep.conformal_resid, std::abs((cp - cm) / (2.0 * h)));
  }
  rep.pass = rep.transport_resid < 1e-6 && rep.derivative_resid < 1e-6 &&
             rep.conformal_resid < 1e-6;
  return rep;
}

PullbackReport pullback_check(const FiberSymbol& s, const AmbientPoint& x,
                              double tau) {
  int n = static_cast<int>(x.z.size());
  PullbackReport rep;
  double s0 = s.fn.eval(x.z);
  for (const CVec& v : tangent_samples(x)) {
    // joint state [z; V], V' = D(field)(z) V by directional differences
    CVec y0(2 * n);
    y0.head(n) = x.z;
    y0.tail(n) = v;
    auto f = [&](const CVec& y) {
      CVec z = y.head(n), V = y.tail(n);
      double hd = 1e-4 / std::max(1.0, V.norm());
      CVec out(2 * n);
      out.head(n) = field_ext(s, z);
      out.tail(n) =
          (field_ext(s, (z + hd * V).eval()) -
           field_ext(s, (z - hd * V).eval())) /
          (2.0 * hd);
      return out;
    };
    auto settle = [&](CVec& y) {
      double nn = y.head(n).norm();
      require(std::abs(nn - 1.0) < 1e-8, ErrorCode::numeric,
              "pullback_check: excessive sphere drift in one step");
      y.head(n) /= nn;
    };
    CVec yt = integrate(f, settle, y0, tau, 1e-10);
    CVec zt = yt.head(n), Vt = yt.tail(n);
    double st = s.fn.eval(normalize_point(zt).z);
    rep.factor = st / s0;
    double lhs = contact_form_raw(zt, Vt);
    double rhs = rep.factor * contact_form_raw(x.z, v);
    rep.resid = std::max(rep.resid, std::abs(lhs - rhs));
  }
  rep.pass = rep.resid < 1e-6;
  return rep;
}

}  // namespace twl
