#pragma once

#include <complex>

#include "entirelab/log_scale.hpp"

namespace entirelab {

/// First-order jet: value and derivative propagated together, so multipliers
/// of long orbits carry no finite-differencing error.  S is the scalar the
/// computation runs in (Complex or LogComplex).
template <class S>
struct Jet {
  S v{};
  S d{};

  static Jet variable(const S& z) { return {z, scalar_one()}; }
  static Jet constant(const S& c) { return {c, scalar_zero()}; }

  static S scalar_one();
  static S scalar_zero();

  friend Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d + b.d}; }
  friend Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d - b.d}; }
  friend Jet operator-(const Jet& a) { return {-a.v, -a.d}; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    S q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
  }
};

template <>
inline Complex Jet<Complex>::scalar_one() { return {1.0, 0.0}; }
template <>
inline Complex Jet<Complex>::scalar_zero() { return {0.0, 0.0}; }
template <>
inline LogComplex Jet<LogComplex>::scalar_one() { return LogComplex::one(); }
template <>
inline LogComplex Jet<LogComplex>::scalar_zero() { return LogComplex::zero(); }

template <class S>
Jet<S> exp(const Jet<S>& a) {
  using std::exp;
  S e = exp(a.v);
  return {e, e * a.d};
}

template <class S>
Jet<S> sin(const Jet<S>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), cos(a.v) * a.d};
}

template <class S>
Jet<S> cos(const Jet<S>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -(sin(a.v) * a.d)};
}

template <class S>
double log_abs_of(const Jet<S>& a) { return log_abs_of(a.v); }

}  // namespace entirelab
