#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "entirelab/errors.hpp"
#include "entirelab/log_scale.hpp"

namespace entirelab {

/// Dense polynomial with complex coefficients, ascending by power.
/// Trailing exact-zero coefficients are trimmed on construction.
class Poly {
 public:
  Poly() : coeffs_{Complex(0.0, 0.0)} {}
  explicit Poly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(Complex(0.0, 0.0));
    while (coeffs_.size() > 1 && coeffs_.back() == Complex(0.0, 0.0))
      coeffs_.pop_back();
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Complex(0.0, 0.0); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(int k) const {
    return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[k]
                                                          : Complex(0.0, 0.0);
  }
  Complex lead() const { return coeffs_.back(); }

  Complex eval(Complex z) const {
    Complex acc = coeffs_.back();
    for (int k = degree() - 1; k >= 0; --k) acc = acc * z + coeffs_[k];
    return acc;
  }
  /// Value and derivative in one Horner pass.
  std::pair<Complex, Complex> eval_jet(Complex z) const {
    Complex v = coeffs_.back(), d{0.0, 0.0};
    for (int k = degree() - 1; k >= 0; --k) {
      d = d * z + v;
      v = v * z + coeffs_[k];
    }
    return {v, d};
  }

  Poly derivative() const {
    if (degree() == 0) return Poly{};
    std::vector<Complex> out(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k)
      out[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Poly(std::move(out));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Complex> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (size_t k = 0; k < out.size(); ++k)
      out[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
    return Poly(std::move(out));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Complex> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (size_t k = 0; k < out.size(); ++k)
      out[k] = a.coeff(static_cast<int>(k)) - b.coeff(static_cast<int>(k));
    return Poly(std::move(out));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly{};
    std::vector<Complex> out(a.coeffs_.size() + b.coeffs_.size() - 1,
                             Complex(0.0, 0.0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i)
      for (size_t j = 0; j < b.coeffs_.size(); ++j)
        out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Poly(std::move(out));
  }
  friend Poly operator*(Complex c, const Poly& p) {
    std::vector<Complex> out = p.coeffs_;
    for (auto& x : out) x *= c;
    return Poly(std::move(out));
  }

 private:
  std::vector<Complex> coeffs_;
};

/// Exact coefficient composition p(q(z)) by Horner in the polynomial
/// semiring; deg(p.q) = deg(p) deg(q).
inline Poly compose(const Poly& p, const Poly& q) {
  Poly acc({p.lead()});
  for (int k = p.degree() - 1; k >= 0; --k) {
    acc = acc * q;
    acc = acc + Poly({p.coeff(k)});
  }
  for (const Complex& c : acc.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw OverflowError("compose: coefficient magnitude exceeds double range");
  return acc;
}

/// n-fold composition p . p . ... . p with a degree guard.
inline Poly compose_iterate(const Poly& p, int n, int max_degree) {
  if (n < 1) throw InvalidInputError("compose_iterate: n must be >= 1");
  double deg = 1.0;
  for (int k = 0; k < n; ++k) {
    deg *= p.degree();
    if (deg > max_degree)
      throw DegreeTooLargeError("compose_iterate: degree " + std::to_string(deg) +
                                " exceeds cap " + std::to_string(max_degree));
  }
  Poly out = p;
  for (int k = 1; k < n; ++k) out = compose(out, p);
  return out;
}

}  // namespace entirelab
