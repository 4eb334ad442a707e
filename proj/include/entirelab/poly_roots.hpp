#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "entirelab/defaults.hpp"
#include "entirelab/poly.hpp"

namespace entirelab {

namespace detail {

/// Residual scale from the spec of roots(): |p(x)| / (|lead| max(1,|x|)^d).
inline double root_residual(const Poly& p, Complex x) {
  double scale = std::abs(p.lead()) *
                 std::pow(std::max(1.0, std::abs(x)), p.degree());
  return std::abs(p.eval(x)) / scale;
}

inline std::vector<Complex> companion_eigen_roots(const std::vector<Complex>& monic) {
  // monic: a_0 .. a_{d-1} with implicit leading 1
  const int d = static_cast<int>(monic.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) m(i, d - 1) = -monic[i];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  std::vector<Complex> out(d);
  for (int i = 0; i < d; ++i) out[i] = solver.eigenvalues()(i);
  return out;
}

}  // namespace detail

/// All roots of p, multiplicity included, by Aberth-Ehrlich simultaneous
/// iteration from a perturbed-circle start, with a companion-matrix
/// eigenvalue fallback when the iteration stalls.  Accepted roots satisfy
/// |p(root)| / (|lead| max(1,|root|)^deg) < 1e-10.
inline std::vector<Complex> roots(const Poly& p_in,
                                  double residual_tol = defaults::kRootResidual) {
  if (p_in.degree() < 1)
    throw InvalidInputError("roots: degree must be at least 1");

  // Exact zero roots split off first.
  std::vector<Complex> coeffs = p_in.coeffs();
  std::vector<Complex> found;
  while (coeffs.size() > 1 && coeffs.front() == Complex(0.0, 0.0)) {
    found.push_back(Complex(0.0, 0.0));
    coeffs.erase(coeffs.begin());
  }
  const int d = static_cast<int>(coeffs.size()) - 1;
  if (d == 0) return found;
  if (d == 1) {
    found.push_back(-coeffs[0] / coeffs[1]);
    return found;
  }
  Poly p(coeffs);
  if (d == 2) {
    Complex a = coeffs[2], b = coeffs[1], c = coeffs[0];
    Complex disc = std::sqrt(b * b - 4.0 * a * c);
    if ((std::conj(b) * disc).real() < 0.0) disc = -disc;
    Complex q = -0.5 * (b + disc);
    Complex x0 = q / a;
    Complex x1 = (q == Complex(0.0, 0.0)) ? Complex(0.0, 0.0) : c / q;
    found.push_back(x0);
    found.push_back(x1);
    return found;
  }

  std::vector<Complex> monic(d);
  for (int k = 0; k < d; ++k) monic[k] = coeffs[k] / coeffs[d];

  double amax = 0.0;
  for (const Complex& c : monic) amax = std::max(amax, std::abs(c));
  const double cauchy = 1.0 + amax;
  const double inner = std::max(1e-3, std::pow(std::abs(monic[0]), 1.0 / d));

  std::vector<Complex> x(d);
  for (int k = 0; k < d; ++k) {
    double t = (k + 0.5) / d;
    double radius = std::pow(inner, 1.0 - t) * std::pow(cauchy, t);
    x[k] = radius * cis(kTwoPi * (k + 0.35) / d + 0.1);
  }

  Poly dp = p.derivative();
  auto aberth_pass = [&]() {
    double max_step = 0.0;
    for (int i = 0; i < d; ++i) {
      auto [pv, pd] = p.eval_jet(x[i]);
      if (pv == Complex(0.0, 0.0)) continue;
      if (pd == Complex(0.0, 0.0)) {
        x[i] += 1e-6 * cauchy * cis(0.7 * i);
        max_step = kPosInf;
        continue;
      }
      Complex newton = pv / pd;
      Complex s{0.0, 0.0};
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        Complex diff = x[i] - x[j];
        if (diff == Complex(0.0, 0.0)) diff = Complex(1e-14 * cauchy, 0.0);
        s += 1.0 / diff;
      }
      Complex denom = 1.0 - newton * s;
      Complex w = (denom == Complex(0.0, 0.0)) ? newton : newton / denom;
      x[i] -= w;
      max_step = std::max(max_step, std::abs(w) / std::max(1.0, std::abs(x[i])));
    }
    return max_step;
  };

  bool converged = false;
  double prev_step = kPosInf;
  int stall = 0;
  for (int it = 0; it < 500; ++it) {
    double step = aberth_pass();
    if (step < 5e-15) { converged = true; break; }
    if (step >= 0.5 * prev_step) {
      if (++stall > 24) break;  // stagnating (e.g. multiple roots at limit)
    } else {
      stall = 0;
    }
    prev_step = std::min(prev_step, step);
  }
  (void)converged;

  auto all_good = [&]() {
    for (const Complex& r : x)
      if (!(detail::root_residual(p, r) < residual_tol)) return false;
    return true;
  };

  if (!all_good()) {
    // companion-matrix fallback, then a few Newton polish steps
    x = detail::companion_eigen_roots(monic);
    for (Complex& r : x) {
      for (int it = 0; it < 8; ++it) {
        auto [pv, pd] = p.eval_jet(r);
        if (pd == Complex(0.0, 0.0)) break;
        Complex step = pv / pd;
        if (!finite(step)) break;
        r -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(r))) break;
      }
    }
    if (!all_good()) {
      std::vector<double> residuals(d);
      for (int i = 0; i < d; ++i) residuals[i] = detail::root_residual(p, x[i]);
      throw NoConvergenceError("roots: residual criterion unmet after fallback",
                               residuals);
    }
  }

  found.insert(found.end(), x.begin(), x.end());
  return found;
}

}  // namespace entirelab
