#include "twl/symbol.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "twl/geometry.hpp"

namespace twl {

namespace {

struct Token {
  enum Kind { number, ident, plus, minus, star, lparen, rparen, end } kind;
  double value = 0.0;
  std::string name;
};

Token tok(Token::Kind k) {
  Token t;
  t.kind = k;
  return t;
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> toks;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '+') { toks.push_back(tok(Token::plus)); ++i; continue; }
    if (c == '-') { toks.push_back(tok(Token::minus)); ++i; continue; }
    if (c == '*') { toks.push_back(tok(Token::star)); ++i; continue; }
    if (c == '(') { toks.push_back(tok(Token::lparen)); ++i; continue; }
    if (c == ')') { toks.push_back(tok(Token::rparen)); ++i; continue; }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t j = i;
      while (j < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[j])) ||
              text[j] == '.' || text[j] == 'e' || text[j] == 'E' ||
              ((text[j] == '+' || text[j] == '-') && j > i &&
               (text[j - 1] == 'e' || text[j - 1] == 'E'))))
        ++j;
      Token t = tok(Token::number);
      try {
        size_t used = 0;
        t.value = std::stod(text.substr(i, j - i), &used);
        if (used != j - i) fail(ErrorCode::parse, "bad number");
      } catch (const Error&) {
        throw;
      } catch (...) {
        fail(ErrorCode::parse,
             "symbol parse: malformed number at position " + std::to_string(i));
      }
      toks.push_back(t);
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_'))
        ++j;
      Token t = tok(Token::ident);
      t.name = text.substr(i, j - i);
      toks.push_back(t);
      i = j;
      continue;
    }
    fail(ErrorCode::parse, std::string("symbol parse: unexpected character '") +
                               c + "' at position " + std::to_string(i));
  }
  toks.push_back(tok(Token::end));
  return toks;
}

// polynomial in z, conj(z) as a list of terms; helper arithmetic
using Poly = std::vector<SymbolTerm>;

void pad(MultiIndex& a, size_t n) { a.resize(std::max(a.size(), n), 0); }

std::string term_key(const MultiIndex& mu, const MultiIndex& nu) {
  std::string s;
  for (int v : mu) s += std::to_string(v) + ',';
  s += '|';
  for (int v : nu) s += std::to_string(v) + ',';
  return s;
}

Poly combine(const Poly& p) {
  size_t n = 0;
  for (const auto& t : p) n = std::max(n, t.mu.size());
  std::map<std::string, SymbolTerm> acc;
  for (SymbolTerm t : p) {
    pad(t.mu, n);
    pad(t.nu, n);
    std::string k = term_key(t.mu, t.nu);
    auto it = acc.find(k);
    if (it == acc.end())
      acc.emplace(k, t);
    else
      it->second.c += t.c;
  }
  Poly out;
  for (auto& [k, t] : acc) {
    (void)k;
    if (std::abs(t.c) > 0.0) out.push_back(std::move(t));
  }
  return out;
}

Poly add(const Poly& a, const Poly& b, double sign) {
  Poly out = a;
  for (SymbolTerm t : b) {
    t.c *= sign;
    out.push_back(std::move(t));
  }
  return combine(out);
}

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  require(a.size() * b.size() <= 200000, ErrorCode::parse,
          "symbol parse: expansion too large");
  for (const auto& ta : a) {
    for (const auto& tb : b) {
      SymbolTerm t;
      size_t n = std::max(ta.mu.size(), tb.mu.size());
      t.mu = ta.mu;
      t.nu = ta.nu;
      pad(t.mu, n);
      pad(t.nu, n);
      for (size_t j = 0; j < tb.mu.size(); ++j) {
        t.mu[j] += tb.mu[j];
        t.nu[j] += tb.nu[j];
      }
      t.c = ta.c * tb.c;
      out.push_back(std::move(t));
    }
  }
  return combine(out);
}

MultiIndex unit(int j) {
  MultiIndex e(j + 1, 0);
  e[j] = 1;
  return e;
}

struct Parser {
  const std::vector<Token>& toks;
  size_t pos = 0;
  bool allow_fiber;
  bool saw_fiber = false;

  const Token& peek() const { return toks[pos]; }
  Token next() { return toks[pos++]; }

  Poly atom_poly(const std::string& name) {
    auto digit = [](char c) -> int {
      require(c >= '0' && c <= '9', ErrorCode::parse,
              "symbol parse: expected a single digit index");
      return c - '0';
    };
    if (name.size() >= 2 && name[0] == 'w') {
      require(name.size() == 2, ErrorCode::parse,
              "symbol parse: moment atoms are w0..w9");
      int j = digit(name[1]);
      return {SymbolTerm{unit(j), unit(j), 1.0}};
    }
    if (name.rfind("re_", 0) == 0 || name.rfind("im_", 0) == 0) {
      require(name.size() == 5, ErrorCode::parse,
              "symbol parse: pairing atoms are re_ij / im_ij with single-digit "
              "indices");
      int i = digit(name[3]);
      int j = digit(name[4]);
      size_t n = static_cast<size_t>(std::max(i, j)) + 1;
      MultiIndex ei = unit(i), ej = unit(j);
      pad(ei, n);
      pad(ej, n);
      if (name[0] == 'r') {
        // (z_i conj(z_j) + z_j conj(z_i)) / 2
        return combine({SymbolTerm{ei, ej, 0.5}, SymbolTerm{ej, ei, 0.5}});
      }
      // (z_i conj(z_j) - z_j conj(z_i)) / (2 i)
      return combine({SymbolTerm{ei, ej, cplx(0.0, -0.5)},
                      SymbolTerm{ej, ei, cplx(0.0, 0.5)}});
    }
    if (name.size() >= 2 && (name[0] == 'r' || name[0] == 'i') &&
        name[1] == 'z') {
      require(allow_fiber, ErrorCode::parse,
              "symbol parse: fiber-dependent atoms (rz*/iz*) are not allowed "
              "in this context");
      require(name.size() == 3, ErrorCode::parse,
              "symbol parse: fiber atoms are rz0..rz9 / iz0..iz9");
      saw_fiber = true;
      int j = digit(name[2]);
      MultiIndex ej = unit(j), zero(static_cast<size_t>(j) + 1, 0);
      if (name[0] == 'r')
        return combine({SymbolTerm{ej, zero, 0.5}, SymbolTerm{zero, ej, 0.5}});
      return combine({SymbolTerm{ej, zero, cplx(0.0, -0.5)},
                      SymbolTerm{zero, ej, cplx(0.0, 0.5)}});
    }
    fail(ErrorCode::parse, "symbol parse: unknown atom '" + name + "'");
  }

  Poly factor() {
    const Token& t = peek();
    if (t.kind == Token::minus) {
      next();
      Poly p = factor();
      for (auto& term : p) term.c = -term.c;
      return p;
    }
    if (t.kind == Token::lparen) {
      next();
      Poly p = expr();
      require(peek().kind == Token::rparen, ErrorCode::parse,
              "symbol parse: missing ')'");
      next();
      return p;
    }
    if (t.kind == Token::number) {
      double v = next().value;
      if (v == 0.0) return {};
      return {SymbolTerm{{}, {}, v}};
    }
    if (t.kind == Token::ident) {
      return atom_poly(next().name);
    }
    fail(ErrorCode::parse, "symbol parse: unexpected token");
  }

  Poly term() {
    Poly p = factor();
    while (peek().kind == Token::star) {
      next();
      p = mul(p, factor());
    }
    return p;
  }

  Poly expr() {
    Poly p;
    double sign = 1.0;
    if (peek().kind == Token::plus || peek().kind == Token::minus)
      sign = (next().kind == Token::minus) ? -1.0 : 1.0;
    p = term();
    if (sign < 0)
      for (auto& t : p) t.c = -t.c;
    while (peek().kind == Token::plus || peek().kind == Token::minus) {
      double s = (next().kind == Token::minus) ? -1.0 : 1.0;
      p = add(p, term(), s);
    }
    return p;
  }
};

}  // namespace

SymbolFunction SymbolFunction::parse(const std::string& text,
                                     bool allow_fiber_dependent) {
  require(!text.empty(), ErrorCode::parse, "symbol parse: empty text");
  std::vector<Token> toks = lex(text);
  Parser P{toks, 0, allow_fiber_dependent, false};
  Poly p = P.expr();
  require(P.peek().kind == Token::end, ErrorCode::parse,
          "symbol parse: trailing input");
  SymbolFunction f;
  f.text_ = text;
  f.terms_ = combine(p);
  f.has_fiber_atoms_ = P.saw_fiber;
  size_t n = 0;
  for (const auto& t : f.terms_) n = std::max(n, t.mu.size());
  for (auto& t : f.terms_) {
    pad(t.mu, n);
    pad(t.nu, n);
  }
  f.nvars_ = static_cast<int>(n);
  return f;
}

bool SymbolFunction::fiber_invariant() const {
  for (const auto& t : terms_)
    if (multi_abs(t.mu) != multi_abs(t.nu)) return false;
  return true;
}

bool SymbolFunction::invariant_under(const Weights& p) const {
  for (const auto& t : terms_) {
    long acc = 0;
    for (size_t j = 0; j < t.mu.size(); ++j) {
      require(j < p.size(), ErrorCode::precondition,
              "invariant_under: symbol references coordinates beyond the "
              "weight vector");
      acc += static_cast<long>(p[j]) * (t.mu[j] - t.nu[j]);
    }
    if (acc != 0) return false;
  }
  return true;
}

int SymbolFunction::total_degree() const {
  int deg = 0;
  for (const auto& t : terms_)
    deg = std::max(deg, multi_abs(t.mu) + multi_abs(t.nu));
  return deg;
}

int SymbolFunction::phase_degree() const {
  int deg = 0;
  for (const auto& t : terms_)
    for (size_t j = 0; j < t.mu.size(); ++j)
      deg = std::max(deg, std::abs(t.mu[j] - t.nu[j]));
  return deg;
}

cplx SymbolFunction::eval_complex(const CVec& z) const {
  cplx acc = 0.0;
  for (const auto& t : terms_) {
    require(static_cast<int>(t.mu.size()) <= z.size(), ErrorCode::precondition,
            "symbol eval: point has fewer coordinates than the symbol uses");
    cplx v = t.c;
    for (size_t j = 0; j < t.mu.size(); ++j) {
      for (int r = 0; r < t.mu[j]; ++r) v *= z[j];
      for (int r = 0; r < t.nu[j]; ++r) v *= std::conj(z[j]);
    }
    acc += v;
  }
  return acc;
}

double SymbolFunction::eval(const CVec& z) const {
  cplx v = eval_complex(z);
  require(std::abs(v.imag()) <= 1e-10 * (1.0 + std::abs(v.real())),
          ErrorCode::numeric, "symbol eval: value drifted off the real axis");
  return v.real();
}

bool SymbolFunction::affine_in_moments() const {
  if (has_fiber_atoms_) return false;
  for (const auto& t : terms_) {
    if (t.mu != t.nu) return false;
    if (multi_abs(t.mu) > 1) return false;
  }
  return true;
}

SymbolFunction::Bounds SymbolFunction::bounds_on_sphere(int d) const {
  require(nvars_ <= d + 1, ErrorCode::precondition,
          "bounds_on_sphere: symbol references coordinates beyond C^{d+1}");
  if (affine_in_moments()) {
    // value = c0 + sum_j c_j w_j on the probability simplex
    double c0 = 0.0;
    std::vector<double> cj(d + 1, 0.0);
    for (const auto& t : terms_) {
      if (multi_abs(t.mu) == 0)
        c0 = t.c.real();
      else
        for (size_t j = 0; j < t.mu.size(); ++j)
          if (t.mu[j] == 1) cj[j] = t.c.real();
    }
    double lo = cj[0], hi = cj[0];
    for (int j = 0; j <= d; ++j) {
      lo = std::min(lo, cj[j]);
      hi = std::max(hi, cj[j]);
    }
    return Bounds{c0 + lo, c0 + hi, true};
  }
  // deterministic sampled range: coordinate circles, pair midpoints, random
  double lo = 1e300, hi = -1e300;
  auto take = [&](const CVec& z) {
    double v = eval(z);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  for (int j = 0; j <= d; ++j) {
    for (int r = 0; r < 8; ++r) {
      CVec z = CVec::Zero(d + 1);
      z[j] = std::polar(1.0, kTwoPi * r / 8.0);
      take(z);
    }
  }
  for (int j = 0; j <= d; ++j)
    for (int l = j + 1; l <= d; ++l)
      for (int r = 0; r < 16; ++r) {
        CVec z = CVec::Zero(d + 1);
        z[j] = 1.0 / std::sqrt(2.0);
        z[l] = std::polar(1.0 / std::sqrt(2.0), kTwoPi * r / 16.0);
        take(z);
      }
  SplitMix64 rng(123456789);
  for (int s = 0; s < 4000; ++s) {
    CVec z = rng.cnormal(d + 1);
    z /= z.norm();
    take(z);
  }
  return Bounds{lo, hi, false};
}

}  // namespace twl
