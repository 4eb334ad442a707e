#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "entirelab/errors.hpp"

namespace entirelab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Largest log magnitude a value may reach before exp() of it leaves double
/// range.  Slightly below log(DBL_MAX).
inline constexpr double kLogDoubleMax = 709.0;

inline Complex cis(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// A nonnegative magnitude stored as its natural log; -inf encodes zero.
/// Products and quotients are sums of logs, so magnitudes up to exp(1e300)
/// stay representable.
struct LogMag {
  double log_abs = kNegInf;

  LogMag() = default;
  explicit LogMag(double log_value) : log_abs(log_value) {}

  static LogMag zero() { return LogMag{}; }
  static LogMag one() { return LogMag{0.0}; }
  static LogMag from_abs(double a) { return LogMag{std::log(a)}; }
  static LogMag of(const Complex& z) { return LogMag{std::log(std::abs(z))}; }

  bool is_zero() const { return log_abs == kNegInf; }

  /// Materialize; +inf when the magnitude exceeds double range.
  double to_abs() const { return std::exp(log_abs); }

  friend LogMag operator*(LogMag a, LogMag b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return LogMag{a.log_abs + b.log_abs};
  }
  friend LogMag operator/(LogMag a, LogMag b) {
    if (a.is_zero()) return zero();
    return LogMag{a.log_abs - b.log_abs};
  }
  LogMag pow(double e) const {
    if (is_zero()) return zero();
    return LogMag{e * log_abs};
  }
  friend bool operator<(LogMag a, LogMag b) { return a.log_abs < b.log_abs; }
  friend bool operator<=(LogMag a, LogMag b) { return a.log_abs <= b.log_abs; }
  friend bool operator>(LogMag a, LogMag b) { return a.log_abs > b.log_abs; }
  friend bool operator>=(LogMag a, LogMag b) { return a.log_abs >= b.log_abs; }
};

/// A complex number w = exp(log_abs) * cis(arg).  Multiplication adds logs,
/// addition factors out the dominant term, exp/sin/cos stay in range as long
/// as the *result's* log magnitude fits in a double.  Phase precision
/// degrades once the imaginary part of an exponent exceeds 1/ulp; magnitudes
/// remain exact-to-rounding throughout.
struct LogComplex {
  double log_abs = kNegInf;
  double arg = 0.0;  // kept in (-pi, pi]

  LogComplex() = default;
  LogComplex(double log_abs, double arg) : log_abs(log_abs), arg(norm_arg(arg)) {}

  static double norm_arg(double a) {
    if (!std::isfinite(a)) return 0.0;
    double r = std::remainder(a, kTwoPi);
    return r;
  }

  static LogComplex zero() { return LogComplex{}; }
  static LogComplex one() { return LogComplex{0.0, 0.0}; }

  static LogComplex from(const Complex& z) {
    if (z == Complex(0.0, 0.0)) return zero();
    return LogComplex{std::log(std::abs(z)), std::arg(z)};
  }
  static LogComplex from_real(double x) {
    if (x == 0.0) return zero();
    return LogComplex{std::log(std::abs(x)), x > 0 ? 0.0 : kPi};
  }

  bool is_zero() const { return log_abs == kNegInf; }

  LogMag mag() const { return LogMag{log_abs}; }
  Complex phase_unit() const { return cis(arg); }

  /// Materialize to an ordinary complex; throws when out of double range.
  Complex to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    if (log_abs > kLogDoubleMax)
      throw OverflowError("LogComplex::to_complex: magnitude exceeds double range");
    double m = std::exp(log_abs);
    return m * cis(arg);
  }

  friend LogComplex operator*(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return LogComplex{a.log_abs + b.log_abs, a.arg + b.arg};
  }
  friend LogComplex operator/(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero()) return zero();
    return LogComplex{a.log_abs - b.log_abs, a.arg - b.arg};
  }
  friend LogComplex operator-(const LogComplex& a) {
    if (a.is_zero()) return zero();
    return LogComplex{a.log_abs, a.arg + kPi};
  }

  friend LogComplex operator+(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const LogComplex& big = (a.log_abs >= b.log_abs) ? a : b;
    const LogComplex& small = (a.log_abs >= b.log_abs) ? b : a;
    // |small/big| <= 1, so the ratio is safe to materialize.
    Complex t = std::exp(small.log_abs - big.log_abs) * cis(small.arg - big.arg);
    Complex s = 1.0 + t;
    if (s == Complex(0.0, 0.0)) return zero();
    return LogComplex{big.log_abs + std::log(std::abs(s)), big.arg + std::arg(s)};
  }
  friend LogComplex operator-(const LogComplex& a, const LogComplex& b) {
    return a + (-b);
  }
};

/// exp(w).  The result's log magnitude is Re(w); throws OverflowError when
/// that real part cannot be represented as a double.
inline LogComplex exp(const LogComplex& w) {
  if (w.is_zero()) return LogComplex::one();
  double lc = std::log(std::abs(std::cos(w.arg)));  // -inf when cos = 0
  double ls = std::log(std::abs(std::sin(w.arg)));
  double re;
  if (w.log_abs + lc > kLogDoubleMax + 2.0)
    throw OverflowError("exp(LogComplex): exponent real part exceeds double range");
  re = std::copysign(std::exp(w.log_abs + lc), std::cos(w.arg));
  if (!std::isfinite(re))
    throw OverflowError("exp(LogComplex): exponent real part exceeds double range");
  double im;
  if (w.log_abs + ls > kLogDoubleMax + 2.0) {
    im = 0.0;  // phase unresolvable at this scale; magnitude stays exact
  } else {
    im = std::copysign(std::exp(w.log_abs + ls), std::sin(w.arg));
    if (!std::isfinite(im)) im = 0.0;
  }
  return LogComplex{re, im};
}

inline LogComplex sin(const LogComplex& w) {
  // sin w = (e^{iw} - e^{-iw}) / 2i
  LogComplex iw{w.log_abs, w.arg + kPi / 2.0};
  LogComplex niw{w.log_abs, w.arg - kPi / 2.0};
  LogComplex two_i{std::log(2.0), kPi / 2.0};
  return (exp(iw) - exp(niw)) / two_i;
}

inline LogComplex cos(const LogComplex& w) {
  LogComplex iw{w.log_abs, w.arg + kPi / 2.0};
  LogComplex niw{w.log_abs, w.arg - kPi / 2.0};
  LogComplex two{std::log(2.0), 0.0};
  return (exp(iw) + exp(niw)) / two;
}

inline double log_abs_of(const LogComplex& w) { return w.log_abs; }
inline double log_abs_of(const Complex& z) { return std::log(std::abs(z)); }

}  // namespace entirelab
