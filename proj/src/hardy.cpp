#include "twl/hardy.hpp"

#include <cmath>
#include <string>

namespace twl {

static std::string key_of(const MultiIndex& a) {
  std::string s;
  for (int v : a) {
    s += std::to_string(v);
    s += ',';
  }
  return s;
}

int HardyBlock::index_of(const MultiIndex& a) const {
  auto it = lookup.find(key_of(a));
  return it == lookup.end() ? -1 : it->second;
}

HardyBlock monomial_norms(int k, int d) {
  require(k >= 0 && d >= 1, ErrorCode::precondition,
          "monomial_norms: need k >= 0, d >= 1");
  HardyBlock B;
  B.k = k;
  B.d = d;
  B.alphas = multi_indices(k, d + 1);
  B.log_norm2.resize(B.dim());
  double lead = d * std::log(kPi) - log_factorial(k + d);
  for (int i = 0; i < B.dim(); ++i) {
    B.log_norm2[i] = lead + log_multi_factorial(B.alphas[i]);
    B.lookup.emplace(key_of(B.alphas[i]), i);
  }
  return B;
}

PointEvaluator::PointEvaluator(const CVec& z)
    : lg(z.size()), ph(z.size()), zero(z.size()) {
  for (int j = 0; j < z.size(); ++j) {
    double a = std::abs(z[j]);
    zero[j] = (a == 0.0);
    lg[j] = zero[j] ? 0.0 : std::log(a);
    ph[j] = std::arg(z[j]);
  }
}

cplx PointEvaluator::monomial(const MultiIndex& a, double log_norm2) const {
  double lmag = -0.5 * log_norm2;
  double phase = 0.0;
  for (size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0) continue;
    if (zero[j]) return cplx(0.0, 0.0);
    lmag += a[j] * lg[j];
    phase += a[j] * ph[j];
  }
  return std::polar(std::exp(lmag), phase);
}

namespace {
cplx section_from_logs(const HardyBlock& B, int idx, const PointEvaluator& L) {
  return L.monomial(B.alphas[idx], B.log_norm2[idx]);
}
}  // namespace

cplx evaluate_section(const HardyBlock& B, int idx, const CVec& z) {
  require(idx >= 0 && idx < B.dim(), ErrorCode::precondition,
          "evaluate_section: index out of range");
  require(z.size() == B.d + 1, ErrorCode::precondition,
          "evaluate_section: dimension mismatch");
  PointEvaluator L(z);
  return section_from_logs(B, idx, L);
}

CVec evaluate_all(const HardyBlock& B, const CVec& z) {
  require(z.size() == B.d + 1, ErrorCode::precondition,
          "evaluate_all: dimension mismatch");
  PointEvaluator L(z);
  CVec out(B.dim());
  for (int i = 0; i < B.dim(); ++i) out[i] = section_from_logs(B, i, L);
  return out;
}

cplx szego_kernel(int k, int d, const CVec& x, const CVec& y) {
  cplx ip = herm(x, y);
  double lead = log_factorial(k + d) - log_factorial(k) - d * std::log(kPi);
  if (ip == cplx(0.0, 0.0)) return k == 0 ? std::exp(lead) : cplx(0.0, 0.0);
  // complex log power, k ~ thousands stays finite
  cplx val = std::exp(lead + static_cast<double>(k) * std::log(ip));
  return val;
}

cplx szego_kernel_sum(const HardyBlock& B, const CVec& x, const CVec& y) {
  PointEvaluator Lx(x), Ly(y);
  cplx acc = 0.0;
  for (int i = 0; i < B.dim(); ++i) {
    // s_alpha(x) conj(s_alpha(y)) with the normalization folded in
    acc += section_from_logs(B, i, Lx) * std::conj(section_from_logs(B, i, Ly));
  }
  return acc;
}

cplx psi2(const CVec& u, const CVec& v) {
  return cplx(0.0, -1.0) * omega0(u, v) - 0.5 * (u - v).squaredNorm();
}

SzegoCheck near_diagonal_szego(int k, const AmbientPoint& x, const CVec& u,
                               const CVec& v) {
  require(k >= 1, ErrorCode::precondition, "near_diagonal_szego: k >= 1");
  int d = x.d();
  require(u.size() == d && v.size() == d, ErrorCode::precondition,
          "near_diagonal_szego: displacement dimension mismatch");
  HeisenbergChart ch = heisenberg_chart(x);
  double rk = std::sqrt(static_cast<double>(k));
  AmbientPoint xu = ch.point(0.0, u / rk);
  AmbientPoint xv = ch.point(0.0, v / rk);
  // log-domain version of (pi/k)^d Pi_k(xu, xv)
  cplx ip = herm(xu.z, xv.z);
  double lead = log_factorial(k + d) - log_factorial(k) -
                d * std::log(static_cast<double>(k));
  cplx measured = std::exp(lead + static_cast<double>(k) * std::log(ip));
  cplx predicted = std::exp(psi2(u, v));
  SzegoCheck out{measured, predicted,
                 std::abs(measured - predicted) / std::abs(predicted)};
  return out;
}

}  // namespace twl
