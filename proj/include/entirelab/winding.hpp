#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "entirelab/defaults.hpp"
#include "entirelab/function_expr.hpp"

namespace entirelab {

struct ComplexBox {
  double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;

  ComplexBox() = default;
  ComplexBox(double re_lo, double re_hi, double im_lo, double im_hi)
      : re_lo(re_lo), re_hi(re_hi), im_lo(im_lo), im_hi(im_hi) {
    if (!(re_lo < re_hi && im_lo < im_hi))
      throw InvalidInputError("ComplexBox: degenerate box");
  }

  Complex center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
  double width() const { return re_hi - re_lo; }
  double height() const { return im_hi - im_lo; }
  double diam() const { return std::hypot(width(), height()); }
  double perimeter() const { return 2.0 * (width() + height()); }

  bool contains(Complex z, double slack = 0.0) const {
    return z.real() >= re_lo - slack && z.real() <= re_hi + slack &&
           z.imag() >= im_lo - slack && z.imag() <= im_hi + slack;
  }
  ComplexBox dilated(double factor) const {
    Complex c = center();
    double hw = 0.5 * width() * factor, hh = 0.5 * height() * factor;
    return {c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh};
  }
  std::array<ComplexBox, 4> quadrants() const {
    Complex c = center();
    return {ComplexBox{re_lo, c.real(), im_lo, c.imag()},
            ComplexBox{c.real(), re_hi, im_lo, c.imag()},
            ComplexBox{re_lo, c.real(), c.imag(), im_hi},
            ComplexBox{c.real(), re_hi, c.imag(), im_hi}};
  }
};

/// The integrand provider: F and F' at a point, in log form so that the
/// ratio F'/F stays computable when |F| is doubly exponential.
using LogJetFn = std::function<Jet<LogComplex>(Complex)>;

/// z -> f^n(z) - z with derivative, in log form.
inline LogJetFn fixed_point_map(ExprPtr f, int n) {
  if (!f) throw InvalidInputError("fixed_point_map: null function");
  ExprPtr fn = (n == 1) ? f : make_iterate(f, n);
  return [fn](Complex z) {
    Jet<LogComplex> w = eval_scalar(*fn, Jet<LogComplex>::variable(LogComplex::from(z)));
    w.v = w.v - LogComplex::from(z);
    w.d = w.d - LogComplex::one();
    return w;
  };
}

struct WindingOptions {
  int initial_nodes_per_edge = defaults::kWindingInitialNodes;
  int max_total_nodes = defaults::kWindingMaxNodes;
  double snap = defaults::kWindingSnap;
  double boundary_tol = defaults::kBoundaryZeroTol;
  int max_dilations = defaults::kBoundaryMaxDilations;
  double dilation = defaults::kBoundaryDilation;
};

namespace detail {

struct EdgeQuadrature {
  Complex a, b;                 // endpoints
  std::vector<Complex> values;  // F'/F at nodes t = i/m, i = 0..m

  Complex node(int i, int m) const {
    double t = static_cast<double>(i) / m;
    return a + t * (b - a);
  }
  Complex integral() const {
    int m = static_cast<int>(values.size()) - 1;
    Complex dz = (b - a) / static_cast<double>(m);
    Complex sum = 0.5 * (values.front() + values.back());
    for (int i = 1; i < m; ++i) sum += values[i];
    return sum * dz;
  }
};

}  // namespace detail

/// Argument-principle zero count: (1/2pi i) contour integral of F'/F over the
/// box boundary, composite trapezoid per edge with node doubling until the
/// unrounded winding lands within `snap` of a stable integer.
///
/// Throws BoundaryZeroError when a zero hugs the contour after the allowed
/// dilation retries, QuadratureStallError past the node budget.
inline int count_zeros(const LogJetFn& F, ComplexBox box,
                       const WindingOptions& opts = {}) {
  const double diam0 = box.diam();
  for (int attempt = 0;; ++attempt) {
    std::array<Complex, 5> corners = {
        Complex{box.re_lo, box.im_lo}, Complex{box.re_hi, box.im_lo},
        Complex{box.re_hi, box.im_hi}, Complex{box.re_lo, box.im_hi},
        Complex{box.re_lo, box.im_lo}};

    bool boundary_zero = false;
    auto integrand = [&](Complex z) -> Complex {
      Jet<LogComplex> jet = F(z);
      double deriv_log = std::max(0.0, jet.d.log_abs);
      if (jet.v.log_abs < std::log(opts.boundary_tol * diam0) + deriv_log) {
        boundary_zero = true;
        return {0.0, 0.0};
      }
      LogComplex ratio = jet.d / jet.v;
      if (ratio.log_abs > kLogDoubleMax) {
        boundary_zero = true;  // a zero must be hugging the contour
        return {0.0, 0.0};
      }
      return ratio.to_complex();
    };

    std::array<detail::EdgeQuadrature, 4> edges;
    int m = opts.initial_nodes_per_edge;
    int total_nodes = 0;
    for (int e = 0; e < 4; ++e) {
      edges[e].a = corners[e];
      edges[e].b = corners[e + 1];
      edges[e].values.resize(m + 1);
      for (int i = 0; i <= m && !boundary_zero; ++i)
        edges[e].values[i] = integrand(edges[e].node(i, m));
      total_nodes += m + 1;
    }

    double prev_winding = kPosInf;
    while (!boundary_zero) {
      Complex total{0.0, 0.0};
      for (auto& e : edges) total += e.integral();
      double winding = total.imag() / kTwoPi;
      double nearest = std::round(winding);
      if (std::abs(winding - nearest) < opts.snap && nearest >= 0.0 &&
          std::abs(winding - prev_winding) < opts.snap && prev_winding != kPosInf)
        return static_cast<int>(nearest);
      prev_winding = winding;

      if (2 * total_nodes > opts.max_total_nodes)
        throw QuadratureStallError("count_zeros: node budget exhausted");
      // double each edge, reusing existing evaluations
      for (auto& e : edges) {
        std::vector<Complex> next(2 * m + 1);
        for (int i = 0; i <= m; ++i) next[2 * i] = e.values[i];
        for (int i = 0; i < m && !boundary_zero; ++i)
          next[2 * i + 1] = integrand(e.node(2 * i + 1, 2 * m));
        e.values = std::move(next);
        total_nodes += m;
      }
      m *= 2;
    }

    if (attempt >= opts.max_dilations)
      throw BoundaryZeroError("count_zeros: zero on the contour after retries");
    box = box.dilated(opts.dilation);
  }
}

/// Cheap pre-scan used to decide whether a contour integral is affordable:
/// max |F'/F| over probe points (log scale) and min log|F| over the probes.
struct WindingEstimate {
  double max_logderiv = kNegInf;   // log of max |F'/F| on the boundary probes
  double min_log_abs = kPosInf;    // min log|F| over boundary + interior probes
  double est_log_nodes = kNegInf;  // log of the estimated node requirement
};

inline WindingEstimate estimate_winding(const LogJetFn& F, const ComplexBox& box,
                                        int probes_per_edge = 8) {
  WindingEstimate est;
  auto probe = [&](Complex z) {
    Jet<LogComplex> jet = F(z);
    est.min_log_abs = std::min(est.min_log_abs, jet.v.log_abs);
    LogComplex ratio = jet.d / jet.v;
    est.max_logderiv = std::max(est.max_logderiv, ratio.log_abs);
  };
  std::array<Complex, 5> corners = {
      Complex{box.re_lo, box.im_lo}, Complex{box.re_hi, box.im_lo},
      Complex{box.re_hi, box.im_hi}, Complex{box.re_lo, box.im_hi},
      Complex{box.re_lo, box.im_lo}};
  for (int e = 0; e < 4; ++e)
    for (int i = 0; i < probes_per_edge; ++i) {
      double t = (i + 0.5) / probes_per_edge;
      probe(corners[e] + t * (corners[e + 1] - corners[e]));
    }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Complex z{box.re_lo + box.width() * (i + 0.5) / 4.0,
                box.im_lo + box.height() * (j + 0.5) / 4.0};
      Jet<LogComplex> jet = F(z);
      est.min_log_abs = std::min(est.min_log_abs, jet.v.log_abs);
    }
  // nodes needed ~ oscillation count ~ max|F'/F| * perimeter / 2pi, padded
  est.est_log_nodes =
      est.max_logderiv + std::log(box.perimeter()) - std::log(kTwoPi) + std::log(8.0);
  return est;
}

}  // namespace entirelab
