#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "entirelab/circle.hpp"
#include "entirelab/min_modulus.hpp"
#include "entirelab/winding.hpp"

namespace entirelab {

enum class OrbitClass { kRepelling, kAttracting, kIndifferent };

inline const char* to_string(OrbitClass c) {
  switch (c) {
    case OrbitClass::kRepelling: return "repelling";
    case OrbitClass::kAttracting: return "attracting";
    case OrbitClass::kIndifferent: return "indifferent";
  }
  return "?";
}

/// An orbit of exact (minimal) period n with its multiplier in
/// log-magnitude + unit-phase form.
struct PeriodicOrbit {
  int period = 0;
  std::vector<Complex> points;    // exactly `period` points
  double multiplier_log_abs = 0.0;
  Complex multiplier_phase{1.0, 0.0};
  OrbitClass classification = OrbitClass::kIndifferent;
  double residual = 0.0;          // max |f(p_k) - p_{k+1}| / max(1, |p_{k+1}|)
};

struct FindOptions {
  double newton_tol = defaults::kNewtonResidual;
  int max_depth = 48;
  int newton_max_steps = 60;
  double prune_log_threshold = 60.0;  // "no resolvable zero here" heuristic
  WindingOptions winding{};
};

struct FindReport {
  std::vector<PeriodicOrbit> orbits;
  std::vector<std::string> warnings;
  int boxes_examined = 0;
  int boxes_pruned_huge = 0;
  int boxes_skipped = 0;
};

namespace detail {

inline double rel_scale(Complex z) { return std::max(1.0, std::abs(z)); }

/// Newton on F(z) = f^n(z) - z in log form; the correction F/F' is small
/// near a zero even when intermediate magnitudes are enormous.
inline std::optional<Complex> newton_refine(const LogJetFn& F, Complex z,
                                            const ComplexBox& box, double tol,
                                            int max_steps) {
  const double slack = box.diam();
  for (int it = 0; it < max_steps; ++it) {
    Jet<LogComplex> jet;
    try {
      jet = F(z);
    } catch (const OverflowError&) {
      return std::nullopt;
    }
    if (jet.v.log_abs <= std::log(tol) + std::log(rel_scale(z)))
      return z;
    LogComplex step = jet.v / jet.d;
    if (step.log_abs > kLogDoubleMax) return std::nullopt;
    Complex dz = step.to_complex();
    if (!finite(dz)) return std::nullopt;
    z -= dz;
    if (!box.contains(z, slack)) return std::nullopt;  // escaped the subbox
  }
  return std::nullopt;
}

struct ZeroCollector {
  const LogJetFn& F;
  const FindOptions& opts;
  FindReport& report;
  std::vector<Complex> zeros;
  double log_budget;

  void add_zero(Complex z) {
    for (const Complex& w : zeros)
      if (std::abs(z - w) < defaults::kOrbitDedupTol * rel_scale(w)) return;
    zeros.push_back(z);
  }

  bool harvest(const ComplexBox& box, int expected) {
    Complex c = box.center();
    std::optional<Complex> z =
        newton_refine(F, c, box, opts.newton_tol, opts.newton_max_steps);
    if (!z) {
      // a few jittered starts before giving up on this box
      for (int i = -1; i <= 1 && !z; ++i)
        for (int j = -1; j <= 1 && !z; ++j) {
          if (i == 0 && j == 0) continue;
          Complex start{c.real() + 0.25 * i * box.width(),
                        c.imag() + 0.25 * j * box.height()};
          z = newton_refine(F, start, box, opts.newton_tol, opts.newton_max_steps);
        }
    }
    if (!z) return false;
    add_zero(*z);
    return expected <= 1;
  }

  void examine(const ComplexBox& box, int depth) {
    ++report.boxes_examined;
    WindingEstimate est = estimate_winding(F, box);
    if (est.est_log_nodes > log_budget) {
      if (est.min_log_abs > opts.prune_log_threshold) {
        ++report.boxes_pruned_huge;
        return;
      }
      if (depth >= opts.max_depth) {
        ++report.boxes_skipped;
        return;
      }
      for (const ComplexBox& q : box.quadrants()) examine(q, depth + 1);
      return;
    }

    int n0;
    try {
      n0 = count_zeros(F, box, opts.winding);
    } catch (const Error& e) {
      ++report.boxes_skipped;
      report.warnings.push_back("subbox (" + std::to_string(box.re_lo) + "," +
                                std::to_string(box.re_hi) + ")x(" +
                                std::to_string(box.im_lo) + "," +
                                std::to_string(box.im_hi) + ") skipped: " + e.what());
      return;
    }
    if (n0 == 0) return;
    if (n0 == 1) {
      if (harvest(box, 1)) return;
    } else if (box.diam() < 1e-7 * rel_scale(box.center())) {
      // unresolvable cluster / multiple zero: take the refined center once
      report.warnings.push_back(
          "multiple zero (count " + std::to_string(n0) +
          ") unresolved at finest scale near (" + std::to_string(box.center().real()) +
          "," + std::to_string(box.center().imag()) + "); recording one point");
      harvest(box, 1);
      return;
    }
    if (depth >= opts.max_depth) {
      ++report.boxes_skipped;
      report.warnings.push_back("max subdivision depth reached with " +
                                std::to_string(n0) + " zeros unresolved");
      return;
    }
    for (const ComplexBox& q : box.quadrants()) examine(q, depth + 1);
  }
};

}  // namespace detail

/// Multiplier of a verified cycle: product of f'(p_k) accumulated in
/// log-magnitude + unit-phase form.  For f = exp the product is additionally
/// cross-checked against the product of the orbit points themselves, which
/// must agree to 1e-9 relative.
inline std::pair<double, Complex> multiplier_of(const FunctionExpr& f,
                                                const std::vector<Complex>& pts) {
  double log_abs = 0.0;
  double arg = 0.0;
  for (const Complex& p : pts) {
    Jet<LogComplex> jet = eval_log_jet(f, p);
    log_abs += jet.d.log_abs;
    arg += jet.d.arg;
  }
  const bool is_exp = std::holds_alternative<FunctionExpr::Builtin>(f.node) &&
                      std::get<FunctionExpr::Builtin>(f.node).tag == BuiltinTag::kExp;
  if (is_exp) {
    double exp_log = 0.0, exp_arg = 0.0;
    for (const Complex& p : pts) {
      exp_log += std::log(std::abs(p));
      exp_arg += std::arg(p);
    }
    double dla = log_abs - exp_log;
    double darg = std::remainder(arg - exp_arg, kTwoPi);
    double rel = std::abs(std::exp(Complex(dla, darg)) - 1.0);
    if (rel > 1e-9)
      throw CrossCheckFailedError(
          "multiplier_of: chain-rule product disagrees with the orbit-point "
          "product for exp (rel err " + std::to_string(rel) + ")");
  }
  return {log_abs, cis(std::remainder(arg, kTwoPi))};
}

/// Locate periodic orbits of f through zeros of f^n(z) - z in `box`.
/// Subdivision is guided by argument-principle counts; boxes whose contour
/// integral is unaffordable or ill-conditioned are skipped with a warning,
/// never silently.  Orbits whose minimal period properly divides n are
/// reported with their true period.
inline FindReport find_periodic(ExprPtr f, int n, const ComplexBox& box,
                                double tol = defaults::kNewtonResidual,
                                const FindOptions& opts_in = {}) {
  if (!f) throw InvalidInputError("find_periodic: null function");
  if (n < 1) throw InvalidInputError("find_periodic: n must be >= 1");
  FindOptions opts = opts_in;
  opts.newton_tol = tol;

  LogJetFn F = fixed_point_map(f, n);
  FindReport report;
  detail::ZeroCollector collector{F, opts, report, {},
                                  std::log((double)opts.winding.max_total_nodes)};
  collector.examine(box, 0);
  if (report.boxes_pruned_huge > 0)
    report.warnings.push_back(
        std::to_string(report.boxes_pruned_huge) +
        " subboxes pruned: |f^n| astronomically large throughout (no "
        "resolvable zero at double precision)");

  // group zeros into orbits
  std::vector<PeriodicOrbit> orbits;
  for (Complex xi : collector.zeros) {
    // minimal period among divisors of n
    int period = n;
    for (int m = 1; m < n; ++m) {
      if (n % m != 0) continue;
      try {
        OrbitResult o = orbit(*f, xi, m);
        if (std::abs(o.points.back() - xi) < defaults::kOrbitDedupTol *
                                                 detail::rel_scale(xi)) {
          period = m;
          break;
        }
      } catch (const OverflowError&) {
        break;
      }
    }

    std::vector<Complex> pts;
    bool ok = true;
    try {
      OrbitResult o = orbit(*f, xi, period);
      pts.assign(o.points.begin(), o.points.end() - 1);
    } catch (const OverflowError&) {
      report.warnings.push_back("orbit through a located zero escapes double "
                                "range; dropped");
      continue;
    }
    // polish every cycle point on its own fixed-point equation
    LogJetFn Fm = (period == n) ? F : fixed_point_map(f, period);
    for (Complex& p : pts) {
      ComplexBox local{p.real() - 1.0, p.real() + 1.0, p.imag() - 1.0,
                       p.imag() + 1.0};
      auto polished = detail::newton_refine(Fm, p, local, tol, 20);
      if (polished) p = *polished;
    }

    // residual check against the orbit invariant
    double residual = 0.0;
    for (size_t k = 0; k < pts.size(); ++k) {
      Complex image = eval(*f, pts[k]);
      Complex target = pts[(k + 1) % pts.size()];
      residual = std::max(residual, std::abs(image - target) /
                                        detail::rel_scale(target));
    }
    if (!(residual < defaults::kOrbitResidualTol)) {
      report.warnings.push_back("orbit residual " + std::to_string(residual) +
                                " above tolerance; dropped");
      continue;
    }

    // canonical rotation: lexicographically smallest point first
    size_t lead = 0;
    for (size_t k = 1; k < pts.size(); ++k) {
      if (pts[k].real() < pts[lead].real() ||
          (pts[k].real() == pts[lead].real() && pts[k].imag() < pts[lead].imag()))
        lead = k;
    }
    std::rotate(pts.begin(), pts.begin() + lead, pts.end());

    bool duplicate = false;
    for (const PeriodicOrbit& o : orbits) {
      if (o.period == period &&
          std::abs(o.points[0] - pts[0]) <
              defaults::kOrbitDedupTol * detail::rel_scale(pts[0])) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;

    PeriodicOrbit orb;
    orb.period = period;
    orb.points = std::move(pts);
    auto [mla, phase] = multiplier_of(*f, orb.points);
    orb.multiplier_log_abs = mla;
    orb.multiplier_phase = phase;
    orb.residual = residual;
    if (mla > defaults::kClassifyTol)
      orb.classification = OrbitClass::kRepelling;
    else if (mla < -defaults::kClassifyTol)
      orb.classification = OrbitClass::kAttracting;
    else
      orb.classification = OrbitClass::kIndifferent;
    orbits.push_back(std::move(orb));
  }

  std::sort(orbits.begin(), orbits.end(),
            [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
              auto key = [](const PeriodicOrbit& o) {
                return std::tuple(o.period, std::round(o.points[0].real() * 1e8),
                                  std::round(o.points[0].imag() * 1e8));
              };
              return key(a) < key(b);
            });
  report.orbits = std::move(orbits);
  return report;
}

/// One row of the Theorem 1 ratio study: the multiplier of a repelling
/// period-n orbit measured against the sandwich bounds on
/// log M(shrink |xi|, f^n), with xi the cycle point whose (n-1)-st image is
/// the largest point of the cycle.
struct BoundStudyRow {
  PeriodicOrbit orbit;
  double shrink = 0.0;
  double xi_abs = 0.0;
  double logM_lower = 0.0;      // sandwich on log M(shrink |xi|, f^n)
  double logM_upper = 0.0;
  double log_logM_lower = 0.0;  // logs of the sandwich bounds
  double log_logM_upper = 0.0;
  double ratio_lower = 0.0;     // |mult| / logM_upper
  double ratio_upper = 0.0;     // |mult| / logM_lower
  bool sanity_1c2 = true;       // exp only: mult_log_abs <= 1.1 * logM at |xi|
};

/// The cycle point whose image chain reaches the cycle maximum after n-1
/// steps, i.e. the successor of the max-modulus point.
inline Complex theorem1_base_point(const PeriodicOrbit& orbit) {
  size_t imax = 0;
  for (size_t k = 1; k < orbit.points.size(); ++k)
    if (std::abs(orbit.points[k]) > std::abs(orbit.points[imax])) imax = k;
  return orbit.points[(imax + 1) % orbit.points.size()];
}

inline std::vector<BoundStudyRow> bound_study_theorem1(
    ExprPtr f, int n, const std::vector<ComplexBox>& boxes, double shrink,
    std::vector<std::string>* warnings = nullptr,
    const FindOptions& opts = {}) {
  if (n < 2) throw InvalidInputError("bound_study_theorem1: n must be >= 2");
  if (!(shrink > 0.0 && shrink < 1.0))
    throw InvalidInputError("bound_study_theorem1: shrink must lie in (0,1)");

  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  // Hypothesis (a3) pre-check: warn, do not block.
  {
    auto reports = check_condition_a3(*f, 1.0, 2.0, {5.0, 10.0});
    bool any = false;
    for (const auto& rep : reports) any = any || rep.witness_rho.has_value();
    if (!any)
      warn("minimum-modulus condition (a=1, b=2) not witnessed at r in {5,10}; "
           "the lower-bound theorem may not apply to this function");
  }

  const bool is_exp = std::holds_alternative<FunctionExpr::Builtin>(f->node) &&
                      std::get<FunctionExpr::Builtin>(f->node).tag == BuiltinTag::kExp;

  std::vector<BoundStudyRow> rows;
  for (const ComplexBox& box : boxes) {
    FindReport found = find_periodic(f, n, box, defaults::kNewtonResidual, opts);
    for (const std::string& w : found.warnings) warn(w);
    for (const PeriodicOrbit& orbit : found.orbits) {
      if (orbit.period != n) continue;  // divisor-period orbits not in scope
      if (orbit.classification != OrbitClass::kRepelling) continue;
      BoundStudyRow row;
      row.orbit = orbit;
      row.shrink = shrink;
      Complex xi = theorem1_base_point(orbit);
      row.xi_abs = std::abs(xi);
      LogMSandwich s = logM_iterate_sandwich(*f, n, shrink * row.xi_abs);
      row.logM_lower = s.lower;
      row.logM_upper = s.upper;
      row.log_logM_lower = s.lower > 0 ? std::log(s.lower) : kNegInf;
      row.log_logM_upper = s.upper > 0 ? std::log(s.upper) : kNegInf;
      row.ratio_lower = std::exp(orbit.multiplier_log_abs - std::log(s.upper));
      row.ratio_upper = std::exp(orbit.multiplier_log_abs - std::log(s.lower));
      if (is_exp) {
        LogMSandwich full = logM_iterate_sandwich(*f, n, row.xi_abs);
        row.sanity_1c2 = orbit.multiplier_log_abs <= 1.1 * full.upper;
      }
      rows.push_back(std::move(row));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const BoundStudyRow& a, const BoundStudyRow& b) {
    return a.xi_abs < b.xi_abs;
  });
  return rows;
}

/// One row of the Theorem 2 study at a fixed point xi of f(g(z)):
/// the (1e) near-extremality measure |g(xi)| / M(|xi|, g) and the (1d)
/// ratio |(f.g)'(xi)| / log M(beta M(|xi|,g), f).
struct Theorem2Row {
  Complex xi{};
  double residual = 0.0;
  double g_over_M = 0.0;
  double mult_log_abs = 0.0;
  double beta_radius = 0.0;
  double logM_beta = 0.0;
  double ratio_1d = 0.0;
};

inline std::vector<Theorem2Row> bound_study_theorem2(
    ExprPtr f, ExprPtr g, const std::vector<ComplexBox>& boxes,
    double beta = defaults::kTheorem2Beta,
    std::vector<std::string>* warnings = nullptr,
    const FindOptions& opts = {}) {
  if (!f || !g) throw InvalidInputError("bound_study_theorem2: null function");
  if (!is_transcendental(*f))
    throw InvalidInputError("bound_study_theorem2: f must be transcendental");
  if (!is_transcendental(*g))
    throw InvalidInputError("bound_study_theorem2: g must be transcendental");
  if (!(beta > 0.0)) throw InvalidInputError("bound_study_theorem2: beta must be positive");

  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };
  {
    auto reports = check_condition_a3(*f, 1.0, 2.0, {5.0, 10.0});
    bool any = false;
    for (const auto& rep : reports) any = any || rep.witness_rho.has_value();
    if (!any)
      warn("minimum-modulus condition (a=1, b=2) not witnessed for f at r in "
           "{5,10}");
  }

  ExprPtr fg = make_compose(f, g);
  std::vector<Theorem2Row> rows;
  for (const ComplexBox& box : boxes) {
    FindReport found = find_periodic(fg, 1, box, defaults::kNewtonResidual, opts);
    for (const std::string& w : found.warnings) warn(w);
    for (const PeriodicOrbit& orbit : found.orbits) {
      Theorem2Row row;
      row.xi = orbit.points[0];
      row.residual = orbit.residual;
      double logMg = log_max_modulus(*g, std::abs(row.xi));
      row.g_over_M = std::exp(eval_log(*g, row.xi).log_abs - logMg);
      row.mult_log_abs = orbit.multiplier_log_abs;
      double log_radius = std::log(beta) + logMg;
      if (log_radius > kLogDoubleMax) {
        warn("theorem2 row at |xi|=" + std::to_string(std::abs(row.xi)) +
             ": beta*M(|xi|,g) exceeds double range; ratio omitted");
        row.beta_radius = kPosInf;
        row.logM_beta = kPosInf;
        row.ratio_1d = 0.0;
      } else {
        row.beta_radius = std::exp(log_radius);
        row.logM_beta = log_max_modulus(*f, row.beta_radius);
        row.ratio_1d = row.logM_beta > 0
                           ? std::exp(row.mult_log_abs - std::log(row.logM_beta))
                           : kPosInf;
      }
      rows.push_back(std::move(row));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Theorem2Row& a, const Theorem2Row& b) {
    return std::abs(a.xi) < std::abs(b.xi) ||
           (std::abs(a.xi) == std::abs(b.xi) && a.xi.imag() < b.xi.imag());
  });
  return rows;
}

}  // namespace entirelab
