#pragma once

#include <cmath>
#include <string>

#include "entirelab/circle.hpp"

namespace entirelab {

/// Result of the annulus form of Harnack's inequality for u = log|f|:
/// min u > (1 - eps) max u on |z| = R, given u positive on the annulus
/// (e^{-2pi/eps} R, e^{2pi/eps} R).
struct HarnackAnnulusReport {
  double min_u = 0.0;
  double max_u = 0.0;
  bool holds = false;
  int circles = 0;
  int angles = 0;
};

/// Verifies the positivity hypothesis by sampling, then checks the
/// inequality on |z| = R.  Throws NotPositiveHarmonicError when a sample of
/// u = log|f| is <= 0 inside the annulus.
inline HarnackAnnulusReport harnack_annulus_check(
    const FunctionExpr& f, double R, double eps,
    int circles = defaults::kHarnackCircles,
    int angles = defaults::kHarnackAngles) {
  if (!(R > 0.0)) throw InvalidInputError("harnack_annulus_check: R must be positive");
  if (!(eps > 0.0 && eps < 1.0))
    throw InvalidInputError("harnack_annulus_check: eps must lie in (0,1)");
  circles = std::max(circles, defaults::kHarnackCircles);
  angles = std::max(angles, defaults::kHarnackAngles);

  const double half_width = kTwoPi / eps;  // annulus is e^{+-2pi/eps} R
  for (int i = 0; i < circles; ++i) {
    double logr = std::log(R) - half_width + (2.0 * half_width) * (i + 0.5) / circles;
    double r = std::exp(logr);
    for (int j = 0; j < angles; ++j) {
      double u = eval_log(f, r * cis(kTwoPi * j / angles)).log_abs;
      if (!(u > 0.0))
        throw NotPositiveHarmonicError(
            "harnack_annulus_check: log|f| not positive at |z|=" + std::to_string(r));
    }
  }

  CircleExtrema ex = circle_extrema(f, R, angles);
  HarnackAnnulusReport rep;
  rep.min_u = ex.log_min.log_abs;
  rep.max_u = ex.log_max.log_abs;
  rep.holds = rep.min_u > (1.0 - eps) * rep.max_u;
  rep.circles = circles;
  rep.angles = angles;
  return rep;
}

/// Two-point Harnack check for u = log|f| positive on D(a, r): at distance
/// rho*r from the center the ratio u(z)/u(a) must lie within
/// [(1-rho)/(1+rho), (1+rho)/(1-rho)].
struct TwoPointReport {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool holds = false;
};

inline TwoPointReport harnack_two_point(const FunctionExpr& f, Complex a,
                                        double disk_r, double rho,
                                        int test_angles = 64,
                                        int positivity_circles = 16,
                                        int positivity_angles = 64) {
  if (!(disk_r > 0.0) || !(rho > 0.0 && rho < 1.0))
    throw InvalidInputError("harnack_two_point: need disk_r > 0 and rho in (0,1)");
  for (int i = 0; i < positivity_circles; ++i) {
    double rr = disk_r * (i + 0.5) / positivity_circles;
    for (int j = 0; j < positivity_angles; ++j) {
      double u = eval_log(f, a + rr * cis(kTwoPi * j / positivity_angles)).log_abs;
      if (!(u > 0.0))
        throw NotPositiveHarmonicError("harnack_two_point: log|f| not positive on the disk");
    }
  }
  double ua = eval_log(f, a).log_abs;
  TwoPointReport rep;
  rep.lower_bound = (1.0 - rho) / (1.0 + rho);
  rep.upper_bound = (1.0 + rho) / (1.0 - rho);
  rep.min_ratio = kPosInf;
  rep.max_ratio = kNegInf;
  for (int j = 0; j < test_angles; ++j) {
    double u = eval_log(f, a + rho * disk_r * cis(kTwoPi * j / test_angles)).log_abs;
    double ratio = u / ua;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  rep.holds = rep.min_ratio >= rep.lower_bound && rep.max_ratio <= rep.upper_bound;
  return rep;
}

}  // namespace entirelab
