#pragma once

#include <optional>
#include <vector>

#include "entirelab/circle.hpp"

namespace entirelab {

/// Witness report for the bounded-minimum-modulus condition: does some
/// rho in (r, b*r) have m(rho, f) <= a?
struct MinModulusReport {
  double r = 0.0;
  double a = 0.0;
  double b = 0.0;
  std::optional<double> witness_rho;
  LogMag witness_log_min;  // m(witness_rho, f) when present
};

/// Search a geometric subgrid of (r, b*r) for m(rho, f) <= a, one report per
/// grid radius.  The subgrid is geometric because the condition is
/// scale-invariant in log r.
inline std::vector<MinModulusReport> check_condition_a3(
    const FunctionExpr& f, double a, double b, const std::vector<double>& r_grid,
    int subgrid = defaults::kMinModulusSubgrid, int samples = 0) {
  if (!(a > 0.0)) throw InvalidInputError("check_condition_a3: a must be positive");
  if (!(b > 1.0)) throw InvalidInputError("check_condition_a3: b must exceed 1");
  subgrid = std::max(subgrid, defaults::kMinModulusSubgrid);
  double log_a = std::log(a);
  std::vector<MinModulusReport> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    if (!(r > 0.0)) throw InvalidInputError("check_condition_a3: radii must be positive");
    MinModulusReport rep;
    rep.r = r;
    rep.a = a;
    rep.b = b;
    for (int j = 0; j < subgrid; ++j) {
      double rho = r * std::pow(b, (j + 0.5) / subgrid);
      CircleExtrema ex = circle_extrema(f, rho, samples);
      if (ex.log_min.log_abs <= log_a) {
        rep.witness_rho = rho;
        rep.witness_log_min = ex.log_min;
        break;
      }
    }
    out.push_back(rep);
  }
  return out;
}

/// Witness search for log m(rho, f) <= (1 - eps) log M(rho, f) on (r, c*r).
/// Radii where log M <= 0 cannot be compared and are recorded as skipped.
struct A4Report {
  double r = 0.0;
  double eps = 0.0;
  double c = 0.0;
  std::optional<double> witness_rho;
  std::vector<double> skipped_rho;  // degenerate comparisons (log M <= 0)
};

inline A4Report check_condition_a4(const FunctionExpr& f, double eps, double c,
                                   double r,
                                   int subgrid = defaults::kMinModulusSubgrid,
                                   int samples = 0) {
  if (!(eps > 0.0 && eps < 1.0))
    throw InvalidInputError("check_condition_a4: eps must lie in (0,1)");
  if (!(c > 1.0)) throw InvalidInputError("check_condition_a4: c must exceed 1");
  if (!(r > 0.0)) throw InvalidInputError("check_condition_a4: r must be positive");
  subgrid = std::max(subgrid, defaults::kMinModulusSubgrid);
  A4Report rep;
  rep.r = r;
  rep.eps = eps;
  rep.c = c;
  for (int j = 0; j < subgrid; ++j) {
    double rho = r * std::pow(c, (j + 0.5) / subgrid);
    CircleExtrema ex = circle_extrema(f, rho, samples);
    if (ex.log_max.log_abs <= 0.0) {
      rep.skipped_rho.push_back(rho);
      continue;
    }
    if (ex.log_min.log_abs <= (1.0 - eps) * ex.log_max.log_abs) {
      rep.witness_rho = rho;
      break;
    }
  }
  return rep;
}

}  // namespace entirelab
