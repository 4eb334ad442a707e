#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "entirelab/defaults.hpp"
#include "entirelab/function_expr.hpp"
#include "entirelab/parallel.hpp"

namespace entirelab {

/// Maximum and minimum modulus of f on |z| = r, in log scale, with the
/// extremal angles.  log_min.is_zero() means |f| vanishes on the circle.
struct CircleExtrema {
  double r = 0.0;
  LogMag log_max;
  double theta_max = 0.0;  // in [0, 2*pi)
  LogMag log_min;
  double theta_min = 0.0;
  int samples = 0;
  double refined_tol = 0.0;
};

namespace detail {

/// Rough central-index estimate used to scale the coarse sample count:
/// |f| oscillates on |z| = r like z^{nu(r)} near max-modulus points.
inline double nu_estimate(const FunctionExpr& f, double r) {
  struct Visitor {
    double r;
    double operator()(const FunctionExpr::Poly& p) const {
      return static_cast<double>(p.coeffs.size() - 1);
    }
    double operator()(const FunctionExpr::Series& s) const {
      double logr = std::log(r);
      int best_k = 0;
      double best = kNegInf;
      for (size_t k = 0; k < s.coeffs.size(); ++k) {
        double lk = std::log(std::abs(s.coeffs[k]));
        if (lk == kNegInf) continue;
        double v = lk + static_cast<double>(k) * logr;
        if (v >= best) { best = v; best_k = static_cast<int>(k); }
      }
      return best_k;
    }
    double operator()(const FunctionExpr::Builtin& b) const {
      switch (b.tag) {
        case BuiltinTag::kExp:
        case BuiltinTag::kSin:
        case BuiltinTag::kCos: return std::max(1.0, r);
        case BuiltinTag::kZExp: return std::max(1.0, r) + 1.0;
      }
      return 1.0;
    }
    double operator()(const FunctionExpr::Compose& c) const {
      double nu_in = nu_estimate(*c.inner, r);
      double log_m_in;
      try {
        log_m_in = eval_log(*c.inner, Complex(r, 0.0)).log_abs;
      } catch (const OverflowError&) {
        return 1e18;
      }
      double m_in = (log_m_in > 40.0) ? std::exp(40.0) : std::exp(std::max(0.0, log_m_in));
      return nu_estimate(*c.outer, m_in) * nu_in;
    }
    double operator()(const FunctionExpr::Iterate& it) const {
      double nu = nu_estimate(*it.base, r);
      double rr = r;
      for (int k = 1; k < it.count; ++k) {
        double lg;
        try {
          lg = eval_log(*it.base, Complex(rr, 0.0)).log_abs;
        } catch (const OverflowError&) {
          return 1e18;
        }
        rr = (lg > 40.0) ? std::exp(40.0) : std::exp(std::max(0.0, lg));
        nu *= nu_estimate(*it.base, rr);
        if (nu > 1e18) return 1e18;
      }
      return nu;
    }
  };
  return std::visit(Visitor{r}, f.node);
}

}  // namespace detail

/// Default coarse sample count: max(64, 8*(1 + nu(r))) capped.
inline int suggested_circle_samples(const FunctionExpr& f, double r) {
  double nu = detail::nu_estimate(f, r);
  double n = 8.0 * (1.0 + nu);
  n = std::max(n, static_cast<double>(defaults::kMinCircleSamples));
  n = std::min(n, static_cast<double>(defaults::kMaxAutoCircleSamples));
  return static_cast<int>(n);
}

/// Coarse equispaced sampling of log|f| on the circle followed by bracketed
/// golden-section refinement of both extrema.  The returned values are
/// certified against every coarse sample.
inline CircleExtrema circle_extrema(const FunctionExpr& f, double r,
                                    int coarse_samples = 0,
                                    double tol = defaults::kAngularTol,
                                    bool require_nonvanishing = false) {
  if (!(r > 0.0)) throw InvalidInputError("circle_extrema: r must be positive");
  int n = coarse_samples > 0
              ? std::max(coarse_samples, defaults::kMinCircleSamples)
              : suggested_circle_samples(f, r);

  std::vector<double> u(n);
  parallel_for(n, [&](int i) {
    double theta = kTwoPi * i / n;
    u[i] = eval_log(f, r * cis(theta)).log_abs;
  });

  int imax = 0, imin = 0;
  for (int i = 1; i < n; ++i) {
    if (u[i] > u[imax]) imax = i;
    if (u[i] < u[imin]) imin = i;
  }
  if (require_nonvanishing && u[imin] == kNegInf)
    throw ZeroOnCircleError("circle_extrema: |f| vanishes on the circle");

  auto value_at = [&](double theta) { return eval_log(f, r * cis(theta)).log_abs; };

  // Golden-section on the bracketing interval around a coarse extremum.
  // sign = +1 maximizes, -1 minimizes.
  auto refine = [&](int idx, double sign, double& theta_out, double& val_out) {
    double h = kTwoPi / n;
    double a = (idx - 1) * h, b = (idx + 1) * h;
    constexpr double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = sign * value_at(x1), f2 = sign * value_at(x2);
    while (b - a > tol) {
      if (f1 >= f2) {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - phi * (b - a);
        f1 = sign * value_at(x1);
      } else {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + phi * (b - a);
        f2 = sign * value_at(x2);
      }
    }
    double mid = 0.5 * (a + b);
    double fm = sign * value_at(mid);
    double best_theta = mid, best = fm;
    if (f1 > best) { best = f1; best_theta = x1; }
    if (f2 > best) { best = f2; best_theta = x2; }
    // certify against the coarse extremum itself
    double coarse = sign * u[idx];
    if (coarse > best) { best = coarse; best_theta = idx * h; }
    theta_out = std::fmod(best_theta + kTwoPi, kTwoPi);
    val_out = sign * best;
  };

  CircleExtrema out;
  out.r = r;
  out.samples = n;
  out.refined_tol = tol;
  double theta, val;
  refine(imax, +1.0, theta, val);
  out.theta_max = theta;
  out.log_max = LogMag{val};
  if (u[imin] == kNegInf) {
    out.theta_min = kTwoPi * imin / n;
    out.log_min = LogMag::zero();
  } else {
    refine(imin, -1.0, theta, val);
    out.theta_min = theta;
    out.log_min = LogMag{val};
  }
  return out;
}

/// Convenience: log M(r, f).
inline double log_max_modulus(const FunctionExpr& f, double r, int samples = 0) {
  return circle_extrema(f, r, samples).log_max.log_abs;
}

/// Sandwich bounds on log M(r, f^n).  Direct log-scale circle sampling when
/// the iterate stays within extended range; otherwise the maximum-principle
/// recursion M(r, f^n) <= M(M(r, f^{n-1}), f) paired with the value of f^n
/// at the argmax angle of f^{n-1} as the lower bound.
struct LogMSandwich {
  double lower = 0.0;
  double upper = 0.0;
  bool direct = true;
};

inline LogMSandwich logM_iterate_sandwich(const FunctionExpr& f, int n, double r,
                                          int samples = 0) {
  if (n < 1) throw InvalidInputError("logM_iterate_sandwich: n >= 1 required");
  ExprPtr base = std::make_shared<FunctionExpr>(f);
  try {
    ExprPtr fn = n == 1 ? base : make_iterate(base, n);
    double lm = log_max_modulus(*fn, r, samples);
    return {lm, lm, true};
  } catch (const OverflowError&) {
    if (n == 1) throw;
  }
  ExprPtr prev = n == 2 ? base : make_iterate(base, n - 1);
  CircleExtrema inner = circle_extrema(*prev, r, samples);
  if (inner.log_max.log_abs > kLogDoubleMax)
    throw OverflowError("logM_iterate_sandwich: intermediate radius exceeds double range");
  double rho = inner.log_max.to_abs();
  double upper = log_max_modulus(f, rho, samples);
  // |f^n| at the argmax angle of f^{n-1}; materializable since log_max fits.
  Complex w_star = eval_log(*prev, r * cis(inner.theta_max)).to_complex();
  double lower = eval_log(f, w_star).log_abs;
  return {lower, upper, false};
}

}  // namespace entirelab
