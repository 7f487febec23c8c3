#pragma once
// Shared numeric types and helpers for the spherical Toeplitz laboratory.
//
// Ambient space is C^{d+1}; the unit sphere S^{2d+1} sits inside it with the
// Hermitian inner product <a,b> = sum_j a_j conj(b_j) (antilinear in the
// second slot).  All linear algebra is Eigen; note Eigen's x.dot(y) is
// conjugate-linear in x, so herm(a,b) below is b.dot(a).

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace twl {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using MultiIndex = std::vector<int>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorCode {
  precondition,  // caller violated a documented input requirement
  parse,         // malformed symbol text or config
  numeric,       // an internal accuracy certificate failed
  config,        // inconsistent run configuration
  io             // file system problem
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) {
  throw Error(c, msg);
}

inline void require(bool ok, ErrorCode c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

// <a,b> = sum a_j conj(b_j)
inline cplx herm(const CVec& a, const CVec& b) { return b.dot(a); }

// Flat symplectic pairing on C^n viewed as R^{2n}: omega0(u,v) = -Im<u,v>.
// With this sign, omega0(u, i*u) = |u|^2 > 0.
inline double omega0(const CVec& u, const CVec& v) {
  return -herm(u, v).imag();
}

// Real part of the Hermitian product = flat Riemannian pairing on R^{2n}.
inline double redot(const CVec& u, const CVec& v) { return herm(u, v).real(); }

double log_factorial(int n);
double log_multi_factorial(const MultiIndex& a);  // sum_j log(a_j!)
int multi_abs(const MultiIndex& a);

// All degree-k multi-indices in d+1 variables, lexicographically decreasing in
// the first coordinate (deterministic order shared by every module).
std::vector<MultiIndex> multi_indices(int k, int nvars);

// Splitmix64 — tiny deterministic generator for frozen-seed sampling in tests
// and for quadrature-free spot checks.  Not for cryptography.
struct SplitMix64 {
  std::uint64_t s;
  explicit SplitMix64(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() {  // in [0,1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // standard normal via Box-Muller (one value per call, cached pair dropped
  // deliberately to keep the state trajectory simple and reproducible)
  double normal();
  CVec cnormal(int n);  // complex standard normal entries
};

}  // namespace twl
