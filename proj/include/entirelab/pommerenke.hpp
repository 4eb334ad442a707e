#pragma once

#include <cmath>
#include <string>

#include "entirelab/circle.hpp"

namespace entirelab {

/// A point with |h(z0)| = 1 whose derivative is at least of the order
/// log M / |z0|:  |h'(z0)| >= (1/2pi) log M(e^{-pi}|z0|, h) / |z0|.
struct PommerenkePoint {
  Complex z0{};
  double log_h_z0 = 0.0;  // log|h(z0)|, must be ~0
  LogMag deriv_abs;       // |h'(z0)|
  LogMag bound_rhs;       // the certified lower bound (zero when it is <= 0)
};

struct PommerenkeResult {
  PommerenkePoint point;
  bool certified = false;
  int walk_steps = 0;
  std::string note;
};

namespace detail {

// Work in the strip: zeta with z = e^zeta, F(zeta) = h(e^zeta).
struct StripMap {
  const FunctionExpr& h;

  double u(Complex zeta) const {
    return eval_log(h, std::exp(zeta)).log_abs;
  }
  // d(log F)/dzeta = h'(z) z / h(z)
  Complex log_deriv(Complex zeta) const {
    Complex z = std::exp(zeta);
    Jet<LogComplex> jet = eval_log_jet(h, z);
    return (jet.d * LogComplex::from(z) / jet.v).to_complex();
  }
};

}  // namespace detail

/// Locate a Pommerenke point of h for the annulus (e^{-pi}R, e^{pi}R).
/// Requires m(R,h) <= 1 < M(R,h).  Strategy: in log coordinates, expand a
/// disk around the max-modulus point until it first touches the level set
/// |h| = 1, refine the touch point by Newton along the touching ray, then
/// walk the level set toward larger |h'| until the bound certifies.
/// A result with certified = false reports the best candidate found; the
/// point is never fabricated.
inline PommerenkeResult find_pommerenke_point(const FunctionExpr& h, double R,
                                              int samples = 0,
                                              int directions = 512,
                                              int max_walk_steps = 2048) {
  CircleExtrema ex = circle_extrema(h, R, samples);
  if (!(ex.log_min.log_abs <= 0.0 && ex.log_max.log_abs > 0.0))
    throw HypothesisViolatedError(
        "find_pommerenke_point: need m(R,h) <= 1 < M(R,h)");

  detail::StripMap strip{h};
  const double logR = std::log(R);
  const Complex zeta1{logR, ex.theta_max};
  const double dtheta = std::remainder(ex.theta_min - ex.theta_max, kTwoPi);

  // Direction angles; the exact direction toward the min-modulus point is
  // included so the initial bracket is guaranteed.
  std::vector<double> omegas(directions);
  for (int i = 0; i < directions; ++i) omegas[i] = kTwoPi * i / directions;
  omegas.push_back(dtheta >= 0 ? kPi / 2.0 : -kPi / 2.0);

  auto circle_min = [&](double t, double& omega_at_min) {
    double best = kPosInf;
    omega_at_min = omegas[0];
    for (double w : omegas) {
      double val = strip.u(zeta1 + t * cis(w));
      if (val < best) {
        best = val;
        omega_at_min = w;
      }
    }
    return best;
  };

  double t_lo = 0.0, t_hi = std::abs(dtheta);
  double omega_star = dtheta >= 0 ? kPi / 2.0 : -kPi / 2.0;
  {
    double w;
    double v_hi = circle_min(t_hi, w);
    if (v_hi > 0.0) t_hi = kPi;  // fall back to the full reach of the strip
  }
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (t_lo + t_hi);
    double w;
    double v = circle_min(mid, w);
    if (v > 0.0) {
      t_lo = mid;
    } else {
      t_hi = mid;
      omega_star = w;
    }
  }

  // Newton along the fixed touching ray, safeguarded by the bisection bracket.
  const Complex dir = cis(omega_star);
  auto ray_u = [&](double s) { return strip.u(zeta1 + s * dir); };
  double s_lo = 0.0, s_hi = kPi;
  {
    // bracket: walk outward until u <= 0
    double s = t_hi;
    double us = ray_u(s);
    while (us > 0.0 && s < kPi) {
      s_lo = s;
      s = std::min(kPi, s * 1.05 + 1e-3);
      us = ray_u(s);
    }
    s_hi = s;
  }
  double s = 0.5 * (s_lo + s_hi);
  double us = ray_u(s);
  for (int it = 0; it < 80 && std::abs(us) > 1e-12; ++it) {
    (us > 0.0 ? s_lo : s_hi) = s;
    Complex lam = strip.log_deriv(zeta1 + s * dir);
    double slope = lam.real() * dir.real() - lam.imag() * dir.imag();
    double s_newton = s - us / slope;
    if (std::isfinite(s_newton) && s_newton > s_lo && s_newton < s_hi)
      s = s_newton;
    else
      s = 0.5 * (s_lo + s_hi);
    us = ray_u(s);
  }

  auto evaluate_candidate = [&](Complex zeta) {
    PommerenkePoint p;
    p.z0 = std::exp(zeta);
    p.log_h_z0 = strip.u(zeta);
    Jet<LogComplex> jet = eval_log_jet(h, p.z0);
    p.deriv_abs = jet.d.mag();
    double az = std::abs(p.z0);
    double logM = log_max_modulus(h, std::exp(-kPi) * az, samples);
    double bound = logM / (kTwoPi * az);
    p.bound_rhs = bound > 0.0 ? LogMag{std::log(bound)} : LogMag::zero();
    return p;
  };

  Complex zeta0 = zeta1 + s * dir;
  PommerenkePoint best = evaluate_candidate(zeta0);
  PommerenkeResult result{best, best.deriv_abs >= best.bound_rhs, 0, ""};
  if (result.certified) return result;

  // Walk the level set |h| = 1 toward larger |h'|, re-projecting with a
  // gradient step after each tangent move.
  auto project = [&](Complex zeta) {
    for (int k = 0; k < 6; ++k) {
      double u = strip.u(zeta);
      if (std::abs(u) < 1e-12) break;
      Complex lam = strip.log_deriv(zeta);
      double n2 = std::norm(lam);
      if (!(n2 > 0.0)) break;
      zeta -= u * std::conj(lam) / n2;
    }
    return zeta;
  };

  const double step = kPi / 256.0;
  for (double sign : {+1.0, -1.0}) {
    Complex zeta = zeta0;
    PommerenkePoint cur = best;
    for (int k = 0; k < max_walk_steps / 2; ++k) {
      Complex lam = strip.log_deriv(zeta);
      double n = std::abs(lam);
      if (!(n > 0.0)) break;
      Complex tangent = sign * Complex(0, 1) * std::conj(lam) / n;
      Complex next = project(zeta + step * tangent);
      if (std::abs(next.real() - logR) > kPi) break;  // stay inside the annulus
      PommerenkePoint cand = evaluate_candidate(next);
      ++result.walk_steps;
      if (std::abs(cand.log_h_z0) > 1e-8) break;
      if (cand.deriv_abs > best.deriv_abs || cand.deriv_abs >= cand.bound_rhs) {
        best = cand;
        if (cand.deriv_abs >= cand.bound_rhs) {
          result.point = cand;
          result.certified = true;
          return result;
        }
      }
      if (!(cand.deriv_abs > cur.deriv_abs) && k > 8) break;  // stopped improving
      cur = cand;
      zeta = next;
    }
  }

  result.point = best;
  result.certified = best.deriv_abs >= best.bound_rhs;
  if (!result.certified)
    result.note = "inequality not certified at finest resolution; best candidate reported";
  return result;
}

}  // namespace entirelab
