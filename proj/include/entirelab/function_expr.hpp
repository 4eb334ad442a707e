#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "entirelab/errors.hpp"
#include "entirelab/jet.hpp"
#include "entirelab/log_scale.hpp"

namespace entirelab {

struct FunctionExpr;
using ExprPtr = std::shared_ptr<const FunctionExpr>;

enum class BuiltinTag { kExp, kSin, kCos, kZExp };

/// Symbolic description of an entire function.  Immutable after
/// construction; all evaluation operations are pure and thread-safe.
struct FunctionExpr {
  struct Poly {
    std::vector<Complex> coeffs;  // ascending by power, leading nonzero
  };
  struct Series {
    std::vector<Complex> coeffs;  // retained Taylor coefficients
    double trust_radius;          // evaluation outside this radius is an error
  };
  struct Builtin {
    BuiltinTag tag;
  };
  struct Compose {
    ExprPtr outer, inner;
  };
  struct Iterate {
    ExprPtr base;
    int count;  // >= 1
  };

  std::variant<Poly, Series, Builtin, Compose, Iterate> node;
};

namespace detail {

/// Trust radius: the radius at which the last retained term first reaches
/// machine epsilon relative to the maximum term.  Beyond it the truncation
/// error can no longer be bounded by the first omitted term.
inline double series_trust_radius(const std::vector<Complex>& coeffs) {
  const int n = static_cast<int>(coeffs.size());
  const double last = std::log(std::abs(coeffs[n - 1]));
  if (last == kNegInf) return kPosInf;
  const double log_eps = std::log(std::numeric_limits<double>::epsilon());
  auto excess = [&](double logr) {
    double best = kNegInf;
    for (int k = 0; k < n - 1; ++k) {
      double lk = std::log(std::abs(coeffs[k]));
      if (lk == kNegInf) continue;
      best = std::max(best, lk + k * logr);
    }
    if (best == kNegInf) return kPosInf;  // only the last term is nonzero
    return last + (n - 1) * logr - (log_eps + best);
  };
  double lo = -745.0, hi = 745.0;
  if (excess(lo) >= 0) return 0.0;
  if (excess(hi) <= 0) return kPosInf;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (excess(mid) <= 0 ? lo : hi) = mid;
  }
  return std::exp(lo);
}

}  // namespace detail

inline ExprPtr make_poly(std::vector<Complex> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == Complex(0.0, 0.0)) coeffs.pop_back();
  if (coeffs.empty() || coeffs.back() == Complex(0.0, 0.0))
    throw InvalidInputError("make_poly: zero polynomial");
  return std::make_shared<FunctionExpr>(FunctionExpr{FunctionExpr::Poly{std::move(coeffs)}});
}

inline ExprPtr make_series(std::vector<Complex> coeffs) {
  if (coeffs.size() < 2)
    throw InvalidInputError("make_series: need at least 2 coefficients");
  double trust = detail::series_trust_radius(coeffs);
  return std::make_shared<FunctionExpr>(
      FunctionExpr{FunctionExpr::Series{std::move(coeffs), trust}});
}

inline ExprPtr make_builtin(BuiltinTag tag) {
  return std::make_shared<FunctionExpr>(FunctionExpr{FunctionExpr::Builtin{tag}});
}

inline ExprPtr make_compose(ExprPtr outer, ExprPtr inner) {
  if (!outer || !inner) throw InvalidInputError("make_compose: null operand");
  return std::make_shared<FunctionExpr>(
      FunctionExpr{FunctionExpr::Compose{std::move(outer), std::move(inner)}});
}

inline ExprPtr make_iterate(ExprPtr base, int count) {
  if (!base) throw InvalidInputError("make_iterate: null operand");
  if (count < 1) throw InvalidInputError("make_iterate: count must be >= 1");
  return std::make_shared<FunctionExpr>(
      FunctionExpr{FunctionExpr::Iterate{std::move(base), count}});
}

namespace detail {

template <class S>
struct ScalarFrom;

template <>
struct ScalarFrom<Complex> {
  static Complex from(const Complex& c) { return c; }
};
template <>
struct ScalarFrom<LogComplex> {
  static LogComplex from(const Complex& c) { return LogComplex::from(c); }
};
template <class T>
struct ScalarFrom<Jet<T>> {
  static Jet<T> from(const Complex& c) { return Jet<T>::constant(ScalarFrom<T>::from(c)); }
};

}  // namespace detail

/// Evaluate f over any scalar S (Complex, LogComplex, or a Jet of either).
/// The input z must already be seeded (Jet::variable for derivatives).
template <class S>
S eval_scalar(const FunctionExpr& f, const S& z) {
  using detail::ScalarFrom;
  struct Visitor {
    const S& z;
    S operator()(const FunctionExpr::Poly& p) const {
      S acc = ScalarFrom<S>::from(p.coeffs.back());
      for (int k = static_cast<int>(p.coeffs.size()) - 2; k >= 0; --k)
        acc = acc * z + ScalarFrom<S>::from(p.coeffs[k]);
      return acc;
    }
    S operator()(const FunctionExpr::Series& s) const {
      if (log_abs_of(z) > std::log(s.trust_radius))
        throw SeriesOutOfTrustError("series evaluated beyond its trust radius");
      S acc = ScalarFrom<S>::from(s.coeffs.back());
      for (int k = static_cast<int>(s.coeffs.size()) - 2; k >= 0; --k)
        acc = acc * z + ScalarFrom<S>::from(s.coeffs[k]);
      return acc;
    }
    S operator()(const FunctionExpr::Builtin& b) const {
      using std::cos;
      using std::exp;
      using std::sin;
      switch (b.tag) {
        case BuiltinTag::kExp: return exp(z);
        case BuiltinTag::kSin: return sin(z);
        case BuiltinTag::kCos: return cos(z);
        case BuiltinTag::kZExp: return z * exp(z);
      }
      throw InvalidInputError("unknown builtin");
    }
    S operator()(const FunctionExpr::Compose& c) const {
      return eval_scalar(*c.outer, eval_scalar(*c.inner, z));
    }
    S operator()(const FunctionExpr::Iterate& it) const {
      S w = z;
      for (int k = 0; k < it.count; ++k) w = eval_scalar(*it.base, w);
      return w;
    }
  };
  return std::visit(Visitor{z}, f.node);
}

inline bool finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// f(z) in ordinary double-complex arithmetic.
inline Complex eval(const FunctionExpr& f, Complex z) {
  Complex w = eval_scalar(f, z);
  if (!finite(w))
    throw OverflowError("eval: value magnitude exceeds double range; use eval_log");
  return w;
}

/// f(z) in log-scale arithmetic; survives doubly-exponential magnitudes.
inline LogComplex eval_log(const FunctionExpr& f, Complex z) {
  return eval_scalar(f, LogComplex::from(z));
}

/// Value and first derivative, propagated by forward jets (chain rule).
inline Jet<Complex> eval_jet(const FunctionExpr& f, Complex z) {
  Jet<Complex> w = eval_scalar(f, Jet<Complex>::variable(z));
  if (!finite(w.v) || !finite(w.d))
    throw OverflowError("eval_jet: magnitude exceeds double range; use eval_log_jet");
  return w;
}

inline Jet<LogComplex> eval_log_jet(const FunctionExpr& f, Complex z) {
  return eval_scalar(f, Jet<LogComplex>::variable(LogComplex::from(z)));
}

/// True when the expression contains a transcendental node (builtin or
/// truncated series) anywhere in its tree.
inline bool is_transcendental(const FunctionExpr& f) {
  struct Visitor {
    bool operator()(const FunctionExpr::Poly&) const { return false; }
    bool operator()(const FunctionExpr::Series&) const { return true; }
    bool operator()(const FunctionExpr::Builtin&) const { return true; }
    bool operator()(const FunctionExpr::Compose& c) const {
      return is_transcendental(*c.outer) || is_transcendental(*c.inner);
    }
    bool operator()(const FunctionExpr::Iterate& it) const {
      return is_transcendental(*it.base);
    }
  };
  return std::visit(Visitor{}, f.node);
}

struct OrbitResult {
  std::vector<Complex> points;  // n+1 points, points[0] = z
  LogMag multiplier_mag;        // |prod f'(points[k])|, log scale
  Complex multiplier_phase;     // unit-modulus phase of the product
};

/// Forward orbit z, f(z), ..., f^n(z) with the cumulative multiplier
/// prod_{k<n} f'(f^k(z)) accumulated in log-magnitude + unit-phase form.
inline OrbitResult orbit(const FunctionExpr& f, Complex z, int n) {
  if (n < 1) throw InvalidInputError("orbit: n must be >= 1");
  OrbitResult out;
  out.points.reserve(n + 1);
  out.points.push_back(z);
  double log_mult = 0.0;
  Complex phase{1.0, 0.0};
  for (int k = 0; k < n; ++k) {
    Jet<Complex> jet;
    try {
      jet = eval_jet(f, out.points.back());
    } catch (const OverflowError&) {
      throw OverflowError("orbit: escape beyond extended range at index " +
                              std::to_string(k), k);
    }
    log_mult += std::log(std::abs(jet.d));
    if (jet.d != Complex(0.0, 0.0)) phase *= jet.d / std::abs(jet.d);
    out.points.push_back(jet.v);
  }
  out.multiplier_mag = LogMag{log_mult};
  out.multiplier_phase = phase;
  return out;
}

// ---------------------------------------------------------------------------
// Text serialization: exp, sin, cos, zexp, poly[1,0,2], series[...],
// iter(exp,3), comp(exp,poly[0,1,1]).  Complex literals: 1, -2.5, 3i, 1+2i.
// ---------------------------------------------------------------------------

namespace detail {

struct Parser {
  std::string_view s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) { ++pos; return true; }
    return false;
  }
  void expect(char c) {
    if (!consume(c))
      throw InvalidInputError("parse error: expected '" + std::string(1, c) +
                              "' at position " + std::to_string(pos));
  }
  bool peek_word(std::string_view w) {
    skip_ws();
    if (s.substr(pos, w.size()) != w) return false;
    size_t end = pos + w.size();
    if (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_'))
      return false;
    pos = end;
    return true;
  }

  double parse_number() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    bool digits = false;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
      digits = true;
      ++pos;
    }
    if (digits && pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
      size_t save = pos;
      ++pos;
      if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
      bool edigits = false;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        edigits = true;
        ++pos;
      }
      if (!edigits) pos = save;
    }
    if (!digits)
      throw InvalidInputError("parse error: expected number at position " +
                              std::to_string(start));
    return std::stod(std::string(s.substr(start, pos - start)));
  }

  Complex parse_complex() {
    skip_ws();
    {
      // bare i / +i / -i
      size_t save = pos;
      double sign = 1.0;
      if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        sign = (s[pos] == '-') ? -1.0 : 1.0;
        ++pos;
      }
      if (pos < s.size() && s[pos] == 'i') {
        ++pos;
        return {0.0, sign};
      }
      pos = save;
    }
    double first = parse_number();
    if (pos < s.size() && s[pos] == 'i') { ++pos; return {0.0, first}; }
    skip_ws();
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      size_t save = pos;
      double sign = (s[pos] == '-') ? -1.0 : 1.0;
      ++pos;
      skip_ws();
      if (pos < s.size() && s[pos] == 'i') { ++pos; return {first, sign}; }
      pos = save;
      double second = parse_number();
      if (pos < s.size() && s[pos] == 'i') { ++pos; return {first, second}; }
      throw InvalidInputError("parse error: expected 'i' after imaginary part at position " +
                              std::to_string(pos));
    }
    return {first, 0.0};
  }

  std::vector<Complex> parse_list() {
    expect('[');
    std::vector<Complex> out;
    out.push_back(parse_complex());
    while (consume(',')) out.push_back(parse_complex());
    expect(']');
    return out;
  }

  ExprPtr parse_expr() {
    skip_ws();
    if (peek_word("exp")) return make_builtin(BuiltinTag::kExp);
    if (peek_word("sin")) return make_builtin(BuiltinTag::kSin);
    if (peek_word("cos")) return make_builtin(BuiltinTag::kCos);
    if (peek_word("zexp")) return make_builtin(BuiltinTag::kZExp);
    if (peek_word("poly")) return make_poly(parse_list());
    if (peek_word("series")) return make_series(parse_list());
    if (peek_word("iter")) {
      expect('(');
      ExprPtr base = parse_expr();
      expect(',');
      skip_ws();
      int n = static_cast<int>(parse_number());
      expect(')');
      return make_iterate(std::move(base), n);
    }
    if (peek_word("comp")) {
      expect('(');
      ExprPtr outer = parse_expr();
      expect(',');
      ExprPtr inner = parse_expr();
      expect(')');
      return make_compose(std::move(outer), std::move(inner));
    }
    throw InvalidInputError("parse error: unknown function at position " +
                            std::to_string(pos));
  }
};

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_complex(const Complex& c) {
  if (c.imag() == 0.0) return format_double(c.real());
  if (c.real() == 0.0) return format_double(c.imag()) + "i";
  std::string im = format_double(c.imag());
  if (!im.empty() && im[0] != '-') im = "+" + im;
  return format_double(c.real()) + im + "i";
}

}  // namespace detail

inline ExprPtr parse_function(std::string_view text) {
  detail::Parser p{text};
  ExprPtr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size())
    throw InvalidInputError("parse error: trailing input at position " +
                            std::to_string(p.pos));
  return e;
}

inline std::string format_function(const FunctionExpr& f) {
  struct Visitor {
    std::string operator()(const FunctionExpr::Poly& p) const {
      std::string out = "poly[";
      for (size_t k = 0; k < p.coeffs.size(); ++k) {
        if (k) out += ",";
        out += detail::format_complex(p.coeffs[k]);
      }
      return out + "]";
    }
    std::string operator()(const FunctionExpr::Series& s) const {
      std::string out = "series[";
      for (size_t k = 0; k < s.coeffs.size(); ++k) {
        if (k) out += ",";
        out += detail::format_complex(s.coeffs[k]);
      }
      return out + "]";
    }
    std::string operator()(const FunctionExpr::Builtin& b) const {
      switch (b.tag) {
        case BuiltinTag::kExp: return "exp";
        case BuiltinTag::kSin: return "sin";
        case BuiltinTag::kCos: return "cos";
        case BuiltinTag::kZExp: return "zexp";
      }
      return "?";
    }
    std::string operator()(const FunctionExpr::Compose& c) const {
      return "comp(" + format_function(*c.outer) + "," + format_function(*c.inner) + ")";
    }
    std::string operator()(const FunctionExpr::Iterate& it) const {
      return "iter(" + format_function(*it.base) + "," + std::to_string(it.count) + ")";
    }
  };
  return std::visit(Visitor{}, f.node);
}

}  // namespace entirelab
