#pragma once
// Observable symbols on the sphere, given as text in a small real-valued
// grammar and expanded internally into polynomials in z and conj(z):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor | '(' expr ')' | number | atom
//   atom   := w<j>            |z_j|^2
//           | re_<i><j>       Re(z_i conj(z_j))
//           | im_<i><j>       Im(z_i conj(z_j))
//           | rz<j>           Re(z_j)      (fiber-dependent, opt-in)
//           | iz<j>           Im(z_j)      (fiber-dependent, opt-in)
//
// Every atom is a real function, so parsed symbols are real-valued; the
// expansion keeps the Hermitian coefficient symmetry exactly.  Digits i, j
// are single characters (ambient indices 0..9 suffice for this laboratory).

#include <string>

#include "twl/action.hpp"
#include "twl/common.hpp"

namespace twl {

struct SymbolTerm {
  MultiIndex mu, nu;  // z^mu conj(z)^nu, both padded to a common length
  cplx c;
};

class SymbolFunction {
 public:
  static SymbolFunction parse(const std::string& text,
                              bool allow_fiber_dependent = false);

  const std::string& text() const { return text_; }
  const std::vector<SymbolTerm>& terms() const { return terms_; }

  // smallest number of ambient coordinates the symbol references
  int min_ambient_vars() const { return nvars_; }
  // invariant under the overall phase z -> e^{i t} z
  bool fiber_invariant() const;
  // invariant under the weighted action with weight vector p
  bool invariant_under(const Weights& p) const;
  int total_degree() const;  // max |mu| + |nu|
  int phase_degree() const;  // max_j |mu_j - nu_j|

  double eval(const CVec& z) const;
  cplx eval_complex(const CVec& z) const;

  struct Bounds {
    double lo, hi;
    bool exact;  // true when the symbol is affine in the moment coordinates
  };
  // Range of the symbol over the sphere in C^{d+1}.  Exact for symbols that
  // are affine in w_0..w_d; otherwise a deterministic sampled estimate.
  Bounds bounds_on_sphere(int d) const;

  // affine in w_0..w_d with no fiber or off-diagonal atoms
  bool affine_in_moments() const;

 private:
  std::string text_;
  std::vector<SymbolTerm> terms_;
  int nvars_ = 0;
  bool has_fiber_atoms_ = false;
};

inline SymbolFunction parse_symbol(const std::string& text,
                                   bool allow_fiber_dependent = false) {
  return SymbolFunction::parse(text, allow_fiber_dependent);
}

}  // namespace twl
