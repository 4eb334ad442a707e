#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "entirelab/circle.hpp"

namespace entirelab {

/// Power-series coefficients in log scale: log|a_k|, -inf for zero entries.
struct SeriesLogCoeffs {
  std::vector<double> log_abs;

  static SeriesLogCoeffs from_values(std::vector<double> log_abs) {
    if (log_abs.size() < 2)
      throw InvalidInputError("SeriesLogCoeffs: need at least 2 coefficients");
    return {std::move(log_abs)};
  }
  /// Coefficients of e^z: log|a_k| = -log k!.
  static SeriesLogCoeffs exp_coeffs(int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = -std::lgamma(k + 1.0);
    return from_values(std::move(v));
  }
  static SeriesLogCoeffs monomial(int d) {
    std::vector<double> v(d + 1, kNegInf);
    v[d] = 0.0;
    return from_values(std::move(v));
  }
  /// One log|a_k| per line; "-inf" allowed; blank lines and '#' skipped.
  static SeriesLogCoeffs from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("SeriesLogCoeffs: cannot open " + path);
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
      size_t h = line.find('#');
      if (h != std::string::npos) line.resize(h);
      std::istringstream ss(line);
      double x;
      if (ss >> x) v.push_back(x);
    }
    return from_values(std::move(v));
  }

  int size() const { return static_cast<int>(log_abs.size()); }
};

/// Maximum term and central index at a radius.  boundary_flag means the
/// maximizer is the last retained index and the result is untrustworthy.
struct WVProfile {
  double r = 0.0;
  double log_mu = 0.0;
  int nu = 0;
  bool boundary_flag = false;
};

/// Exact maximization of log|a_k| + k log r over the retained indices.
/// Ties break to the largest index.
inline WVProfile max_term(const SeriesLogCoeffs& coeffs, double r,
                          bool strict = false) {
  if (!(r > 0.0)) throw InvalidInputError("max_term: r must be positive");
  const double logr = std::log(r);
  WVProfile out;
  out.r = r;
  double best = kNegInf;
  int best_k = -1;
  for (int k = 0; k < coeffs.size(); ++k) {
    double lk = coeffs.log_abs[k];
    if (lk == kNegInf) continue;
    double v = lk + k * logr;
    if (v >= best) { best = v; best_k = k; }
  }
  if (best_k < 0) throw InvalidInputError("max_term: all coefficients are zero");
  out.log_mu = best;
  out.nu = best_k;
  out.boundary_flag = (best_k == coeffs.size() - 1);
  if (strict && out.boundary_flag)
    throw TruncationDominatesError(
        "max_term: maximum term attained at the truncation edge; extend N");
  return out;
}

/// Max relative errors of the local-model relations near a max-modulus point:
///   2a:  g(z0 e^tau) ~ g(z0) e^{nu tau}
///   2a1: |g(z0 e^tau)| ~ M(|z0 e^tau|, g)
///   2b:  g'(z0 e^tau) ~ (nu / (z0 e^tau)) g(z0 e^tau)
/// sampled on a disk grid |tau| <= K/nu.
struct LocalModelReport {
  double r = 0.0;
  int nu = 0;
  Complex z0{};
  double err_2a = 0.0;
  double err_2a1 = 0.0;
  double err_2b = 0.0;
  int samples = 0;
};

inline LocalModelReport verify_local_model(const FunctionExpr& g,
                                           const SeriesLogCoeffs& coeffs,
                                           double r, double K,
                                           int tau_samples = 64,
                                           int circle_samples = 0) {
  WVProfile prof = max_term(coeffs, r);
  CircleExtrema ex = circle_extrema(g, r, circle_samples);
  LocalModelReport rep;
  rep.r = r;
  rep.nu = prof.nu;
  rep.z0 = r * cis(ex.theta_max);

  LogComplex g_z0 = eval_log(g, rep.z0);
  const double tau_max = K / std::max(1, prof.nu);
  const int n_rad = 4;
  const int n_ang = std::max(4, tau_samples / n_rad);

  auto record = [&](Complex tau) {
    Complex w = rep.z0 * std::exp(tau);
    LogComplex g_w = eval_log(g, w);
    // 2a: g(w) / (g(z0) e^{nu tau}) - 1
    LogComplex model{g_z0.log_abs + prof.nu * tau.real(),
                     g_z0.arg + prof.nu * tau.imag()};
    Complex ratio_a = (g_w / model).to_complex();
    rep.err_2a = std::max(rep.err_2a, std::abs(ratio_a - 1.0));
    // 2a1: |g(w)| / M(|w|, g) - 1
    double logM_w = log_max_modulus(g, std::abs(w), circle_samples);
    rep.err_2a1 = std::max(rep.err_2a1, std::abs(std::exp(g_w.log_abs - logM_w) - 1.0));
    // 2b: g'(w) w / (nu g(w)) - 1
    Jet<LogComplex> jet = eval_log_jet(g, w);
    Complex ratio_b =
        (jet.d * LogComplex::from(w) / (LogComplex::from_real(prof.nu) * jet.v))
            .to_complex();
    rep.err_2b = std::max(rep.err_2b, std::abs(ratio_b - 1.0));
    ++rep.samples;
  };

  record(Complex(0.0, 0.0));
  for (int i = 1; i <= n_rad; ++i) {
    double rho = tau_max * i / n_rad;
    for (int j = 0; j < n_ang; ++j) record(rho * cis(kTwoPi * j / n_ang));
  }
  return rep;
}

/// Per-radius comparison of log mu with log M, plus the central-index bound
/// nu <= (log mu)^{1+eps}.
struct MuVsMRow {
  double r = 0.0;
  int nu = 0;
  double log_mu = 0.0;
  double log_M = 0.0;
  double ratio = 0.0;  // log mu / log M
  bool nu_bound_holds = false;
  bool boundary_flag = false;
};

inline std::vector<MuVsMRow> verify_mu_vs_M(const SeriesLogCoeffs& coeffs,
                                            const FunctionExpr& g,
                                            const std::vector<double>& r_grid,
                                            double eps = 0.1,
                                            int circle_samples = 0) {
  std::vector<MuVsMRow> rows;
  rows.reserve(r_grid.size());
  for (double r : r_grid) {
    WVProfile prof = max_term(coeffs, r);
    MuVsMRow row;
    row.r = r;
    row.nu = prof.nu;
    row.log_mu = prof.log_mu;
    row.log_M = log_max_modulus(g, r, circle_samples);
    row.ratio = prof.log_mu / row.log_M;
    row.nu_bound_holds =
        prof.log_mu > 0.0 && prof.nu <= std::pow(prof.log_mu, 1.0 + eps);
    row.boundary_flag = prof.boundary_flag;
    rows.push_back(row);
  }
  return rows;
}

/// Newton solution of log g(z0 e^tau) - log g(z0) = sigma in the branch
/// nearest nu*tau = sigma, carried out in log coordinates so enormous
/// magnitudes never materialize.
struct PreimageResult {
  Complex tau{};
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {

inline PreimageResult solve_log_equation(const FunctionExpr& g, Complex z0,
                                         Complex sigma, int nu) {
  if (nu < 1) throw InvalidInputError("solve_log_equation: nu must be >= 1");
  LogComplex base = eval_log(g, z0);
  Complex tau = sigma / static_cast<double>(nu);
  double im_prev = 0.0;
  std::vector<double> trajectory;

  auto phi = [&](Complex t) {
    LogComplex val = eval_log(g, z0 * std::exp(t));
    double re = val.log_abs - base.log_abs - sigma.real();
    double im_raw = val.arg - base.arg - sigma.imag();
    double im = im_prev + std::remainder(im_raw - im_prev, kTwoPi);
    im_prev = im;
    return Complex(re, im);
  };

  Complex residual = phi(tau);
  trajectory.push_back(std::abs(residual));
  int it = 0;
  for (; it < defaults::kPreimageMaxSteps &&
         std::abs(residual) > defaults::kPreimageResidual;
       ++it) {
    Complex w = z0 * std::exp(tau);
    Jet<LogComplex> jet = eval_log_jet(g, w);
    Complex slope = (jet.d * LogComplex::from(w) / jet.v).to_complex();
    if (!finite(slope) || slope == Complex(0.0, 0.0)) break;
    tau -= residual / slope;
    residual = phi(tau);
    trajectory.push_back(std::abs(residual));
  }
  if (std::abs(residual) > defaults::kPreimageResidual)
    throw NoConvergenceError("solve_log_equation: Newton failed to converge",
                             trajectory);
  return {tau, std::abs(residual), it};
}

}  // namespace detail

/// Solve g(z0 e^tau) = g(z0) e^sigma near a max-modulus point z0.
/// Post: residual < 1e-10 (log scale) and |nu tau - sigma| < 0.5.
inline PreimageResult solve_preimage(const FunctionExpr& g, Complex z0,
                                     Complex sigma, int nu) {
  PreimageResult res = detail::solve_log_equation(g, z0, sigma, nu);
  if (std::abs(static_cast<double>(nu) * res.tau - sigma) >= 0.5)
    throw NoConvergenceError(
        "solve_preimage: solution escaped the expected branch");
  return res;
}

/// The j-th branch tau_j with g(z e^{tau_j}) = g(z), nu tau_j ~ 2 pi i j,
/// plus a finite-difference estimate of d(z e^{tau_j(z)})/dz.
struct BranchResult {
  Complex tau{};
  double residual = 0.0;
  int iterations = 0;
  Complex dpsi_dz{};
};

inline BranchResult solve_branch(const FunctionExpr& g, Complex z, int j,
                                 int nu) {
  if (j == 0) return {Complex(0.0, 0.0), 0.0, 0, Complex(1.0, 0.0)};
  Complex sigma(0.0, kTwoPi * j);
  PreimageResult center = detail::solve_log_equation(g, z, sigma, nu);
  if (std::abs(static_cast<double>(nu) * center.tau - sigma) >= 0.5)
    throw NoConvergenceError("solve_branch: solution escaped the expected branch");
  const double h = 1e-6;
  Complex zp = z * (1.0 + h), zm = z * (1.0 - h);
  PreimageResult up = detail::solve_log_equation(g, zp, sigma, nu);
  PreimageResult um = detail::solve_log_equation(g, zm, sigma, nu);
  Complex psi_p = zp * std::exp(up.tau), psi_m = zm * std::exp(um.tau);
  BranchResult out;
  out.tau = center.tau;
  out.residual = center.residual;
  out.iterations = center.iterations;
  out.dpsi_dz = (psi_p - psi_m) / (zp - zm);
  return out;
}

}  // namespace entirelab
