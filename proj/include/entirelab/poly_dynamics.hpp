#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "entirelab/poly_roots.hpp"
#include "entirelab/rng.hpp"

namespace entirelab {

/// Critical points of p and its clustered critical values.  cv is genuinely
/// discontinuous under perturbation, so the clustering tolerance and a gap
/// statistic ride along with every count.
struct CriticalData {
  std::vector<Complex> critical_points;           // d-1 values with multiplicity
  std::vector<Complex> critical_values_clustered; // one representative per cluster
  int cv_count = 0;
  double cluster_tol = 0.0;
  double gap_stat = kPosInf;  // min inter-cluster distance / cluster_tol
};

namespace detail {

/// Single-linkage clustering at threshold tol; returns cluster index per item.
inline std::vector<int> single_linkage(const std::vector<Complex>& pts, double tol) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(pts[i] - pts[j]) <= tol) parent[find(i)] = find(j);
  std::vector<int> label(n, -1);
  int next = 0;
  std::vector<int> result(n);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (label[r] < 0) label[r] = next++;
    result[i] = label[r];
  }
  return result;
}

}  // namespace detail

/// Roots of p' pushed through p and clustered by single linkage.
/// cluster_tol <= 0 selects the default 1e-8 * max(1, scale of the values).
inline CriticalData critical_values(const Poly& p, double cluster_tol = 0.0) {
  if (p.degree() < 2)
    throw InvalidInputError("critical_values: degree must be at least 2");
  CriticalData out;
  out.critical_points = roots(p.derivative());
  std::vector<Complex> values(out.critical_points.size());
  double scale = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    values[i] = p.eval(out.critical_points[i]);
    scale = std::max(scale, std::abs(values[i]));
  }
  out.cluster_tol = cluster_tol > 0.0
                        ? cluster_tol
                        : defaults::kClusterTolScale * std::max(1.0, scale);
  std::vector<int> cluster = detail::single_linkage(values, out.cluster_tol);
  int n_clusters = *std::max_element(cluster.begin(), cluster.end()) + 1;
  out.cv_count = n_clusters;
  out.critical_values_clustered.assign(n_clusters, Complex(0.0, 0.0));
  std::vector<int> sizes(n_clusters, 0);
  for (size_t i = 0; i < values.size(); ++i) {
    out.critical_values_clustered[cluster[i]] += values[i];
    ++sizes[cluster[i]];
  }
  for (int c = 0; c < n_clusters; ++c)
    out.critical_values_clustered[c] /= static_cast<double>(sizes[c]);
  for (size_t i = 0; i < values.size(); ++i)
    for (size_t j = i + 1; j < values.size(); ++j)
      if (cluster[i] != cluster[j])
        out.gap_stat = std::min(out.gap_stat,
                                std::abs(values[i] - values[j]) / out.cluster_tol);
  return out;
}

/// All fixed points of p with multipliers, Lambda(p), and the count of
/// non-repelling multipliers (|lambda| <= 1 + indifferent_tol, the
/// conservative direction for the counting bound).
struct FixedPointSpectrum {
  std::vector<Complex> fixed_points;
  std::vector<Complex> multipliers;
  double lambda_max = 0.0;
  int nonrepelling_count = 0;
  double indifferent_tol = 0.0;
};

inline FixedPointSpectrum fixed_point_spectrum(
    const Poly& p, double indifferent_tol = defaults::kIndifferentTol) {
  if (p.degree() < 1)
    throw InvalidInputError("fixed_point_spectrum: degree must be at least 1");
  Poly shifted = p - Poly({Complex(0.0, 0.0), Complex(1.0, 0.0)});
  if (shifted.degree() != p.degree())
    throw InvalidInputError(
        "fixed_point_spectrum: p(z) - z degenerates (affine map with slope 1)");
  FixedPointSpectrum out;
  out.indifferent_tol = indifferent_tol;
  out.fixed_points = roots(shifted);
  Poly dp = p.derivative();
  out.multipliers.reserve(out.fixed_points.size());
  for (Complex xi : out.fixed_points) {
    Complex lambda = dp.eval(xi);
    out.multipliers.push_back(lambda);
    out.lambda_max = std::max(out.lambda_max, std::abs(lambda));
    if (std::abs(lambda) <= 1.0 + indifferent_tol) ++out.nonrepelling_count;
  }
  return out;
}

/// deg(p) > 2 cv(p) forces a repelling fixed point; the proof's counting
/// bound is nonrepelling <= 2 cv(p).  A report where the hypothesis applies
/// but no repelling fixed point shows up is flagged as a numerical
/// contradiction for investigation.
struct Prop1Report {
  bool applies = false;
  bool has_repelling = false;
  int nonrepelling_count = 0;
  int cv_count = 0;
  int two_cv = 0;
  bool counting_bound_holds = false;
  bool contradiction = false;
  double cluster_gap_stat = kPosInf;
};

inline Prop1Report check_proposition1(
    const Poly& p, double cluster_tol = 0.0,
    double indifferent_tol = defaults::kIndifferentTol) {
  if (p.degree() < 2)
    throw InvalidInputError("check_proposition1: degree must be at least 2");
  CriticalData cd = critical_values(p, cluster_tol);
  FixedPointSpectrum sp = fixed_point_spectrum(p, indifferent_tol);
  Prop1Report rep;
  rep.cv_count = cd.cv_count;
  rep.two_cv = 2 * cd.cv_count;
  rep.applies = p.degree() > rep.two_cv;
  rep.nonrepelling_count = sp.nonrepelling_count;
  for (Complex lambda : sp.multipliers)
    rep.has_repelling = rep.has_repelling ||
                        std::abs(lambda) > 1.0 + indifferent_tol;
  rep.counting_bound_holds = sp.nonrepelling_count <= rep.two_cv;
  rep.contradiction = rep.applies && !rep.has_repelling;
  rep.cluster_gap_stat = cd.gap_stat;
  return rep;
}

/// Both inequalities of the critical-value composition bound:
/// cv(p.q) <= cv(p) + deg(q) - 1 <= deg(p) + deg(q) - 2.
struct CvCompositionReport {
  int cv_pq = 0;
  int cv_p = 0;
  int deg_p = 0;
  int deg_q = 0;
  bool first_holds = false;
  bool second_holds = false;
  bool unreliable = false;  // clusters within 10x tolerance of each other
  double gap_stat = kPosInf;
};

inline CvCompositionReport check_cv_composition(const Poly& p, const Poly& q,
                                                double cluster_tol = 0.0) {
  if (p.degree() < 2 || q.degree() < 2)
    throw InvalidInputError("check_cv_composition: both degrees must be >= 2");
  CriticalData cd_p = critical_values(p, cluster_tol);
  CriticalData cd_pq = critical_values(compose(p, q), cluster_tol);
  CvCompositionReport rep;
  rep.cv_pq = cd_pq.cv_count;
  rep.cv_p = cd_p.cv_count;
  rep.deg_p = p.degree();
  rep.deg_q = q.degree();
  rep.first_holds = rep.cv_pq <= rep.cv_p + rep.deg_q - 1;
  rep.second_holds = rep.cv_p + rep.deg_q - 1 <= rep.deg_p + rep.deg_q - 2;
  rep.gap_stat = std::min(cd_p.gap_stat, cd_pq.gap_stat);
  rep.unreliable = rep.gap_stat < 10.0;
  return rep;
}

/// p.q of cubics (or higher) always has a repelling fixed point.
inline bool check_corollary1(const Poly& p, const Poly& q,
                             double indifferent_tol = defaults::kIndifferentTol) {
  if (p.degree() < 3 || q.degree() < 3)
    throw InvalidInputError("check_corollary1: both degrees must be >= 3");
  FixedPointSpectrum sp = fixed_point_spectrum(compose(p, q), indifferent_tol);
  for (Complex lambda : sp.multipliers)
    if (std::abs(lambda) > 1.0 + indifferent_tol) return true;
  return false;
}

/// Lambda(p^n) against d^n, over all fixed points of p^n and restricted to
/// genuine period-n points (fixed points of p^n that are not fixed by any
/// proper-divisor iterate).
struct LambdaIterateReport {
  double lambda_pn = 0.0;
  double d_pow_n = 0.0;
  double ratio = 0.0;
  double lambda_restricted = 0.0;
  double ratio_restricted = 0.0;
  int fixed_count = 0;
  int genuine_count = 0;
};

inline LambdaIterateReport lambda_iterate_study(
    const Poly& p, int n, double indifferent_tol = defaults::kIndifferentTol,
    int max_degree = defaults::kMaxIterateDegree) {
  if (p.degree() < 2)
    throw InvalidInputError("lambda_iterate_study: degree must be at least 2");
  if (n < 1) throw InvalidInputError("lambda_iterate_study: n must be >= 1");
  Poly pn = compose_iterate(p, n, max_degree);
  FixedPointSpectrum sp = fixed_point_spectrum(pn, indifferent_tol);
  LambdaIterateReport rep;
  rep.lambda_pn = sp.lambda_max;
  rep.d_pow_n = std::pow(p.degree(), n);
  rep.ratio = sp.lambda_max / rep.d_pow_n;
  rep.fixed_count = static_cast<int>(sp.fixed_points.size());
  for (size_t i = 0; i < sp.fixed_points.size(); ++i) {
    Complex xi = sp.fixed_points[i];
    bool genuine = true;
    for (int m = 1; m < n && genuine; ++m) {
      if (n % m != 0) continue;
      Complex w = xi;
      for (int k = 0; k < m; ++k) w = p.eval(w);
      if (std::abs(w - xi) <= 1e-6 * std::max(1.0, std::abs(xi))) genuine = false;
    }
    if (genuine) {
      ++rep.genuine_count;
      rep.lambda_restricted =
          std::max(rep.lambda_restricted, std::abs(sp.multipliers[i]));
    }
  }
  rep.ratio_restricted = rep.lambda_restricted / rep.d_pow_n;
  return rep;
}

/// Exploratory (deg, cv, Lambda) sampling: monomial controls, generic
/// coefficients, and a low-cv construction that integrates a derivative
/// built from repeated root blocks.
struct LandscapeRow {
  std::string construction;
  int degree = 0;
  int cv = 0;
  double lambda = 0.0;
  double gap_stat = kPosInf;
};

struct LandscapeConfig {
  int degree_lo = 2;
  int degree_hi = 10;
  int trials = 20;  // per construction per degree
  std::uint64_t seed = 1;
  double cluster_tol = 0.0;
  double indifferent_tol = defaults::kIndifferentTol;
};

inline std::vector<LandscapeRow> lambda_landscape(const LandscapeConfig& cfg) {
  if (cfg.degree_lo < 2 || cfg.degree_hi < cfg.degree_lo)
    throw InvalidInputError("lambda_landscape: bad degree range");
  std::vector<LandscapeRow> rows;
  Rng rng(cfg.seed);

  auto emit = [&](const std::string& kind, const Poly& p) {
    CriticalData cd = critical_values(p, cfg.cluster_tol);
    FixedPointSpectrum sp = fixed_point_spectrum(p, cfg.indifferent_tol);
    rows.push_back({kind, p.degree(), cd.cv_count, sp.lambda_max, cd.gap_stat});
  };

  for (int d = cfg.degree_lo; d <= cfg.degree_hi; ++d) {
    // monomial control row: cv = 1, Lambda = d
    std::vector<Complex> mono(d + 1, Complex(0.0, 0.0));
    mono[d] = 1.0;
    emit("monomial", Poly(mono));

    for (int t = 0; t < cfg.trials; ++t) {
      // generic: monic with iid unit-disk coefficients
      std::vector<Complex> c(d + 1);
      for (int k = 0; k < d; ++k) c[k] = rng.unit_disk();
      c[d] = 1.0;
      emit("generic", Poly(c));
    }

    for (int t = 0; t < cfg.trials; ++t) {
      // low-cv: p' = d (z - c1)^{m} (z - c2)^{d-1-m}, integrated
      int m = rng.uniform_int(1, d - 1);
      Complex c1 = rng.unit_disk(), c2 = rng.unit_disk();
      Poly dp({Complex(static_cast<double>(d), 0.0)});
      Poly b1({-c1, Complex(1.0, 0.0)}), b2({-c2, Complex(1.0, 0.0)});
      for (int k = 0; k < m; ++k) dp = dp * b1;
      for (int k = 0; k < d - 1 - m; ++k) dp = dp * b2;
      // integrate coefficientwise, then add a random constant
      std::vector<Complex> ic(dp.degree() + 2, Complex(0.0, 0.0));
      ic[0] = rng.unit_disk();
      for (int k = 0; k <= dp.degree(); ++k)
        ic[k + 1] = dp.coeff(k) / static_cast<double>(k + 1);
      emit("low_cv", Poly(ic));
    }
  }
  return rows;
}

}  // namespace entirelab
