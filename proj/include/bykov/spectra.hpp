#pragma once

// Fixed points of the return map, elliptic/hyperbolic classification from the
// chain-rule Jacobian, trace scans along reversal fibers, and the heuristic
// strip-crossing check for horseshoes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "bykov/maps.hpp"
#include "bykov/params.hpp"
#include "bykov/reversal.hpp"

namespace bykov {

enum class StabilityClass { elliptic, hyperbolic, parabolic_within_tol };

inline const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::elliptic: return "elliptic";
    case StabilityClass::hyperbolic: return "hyperbolic";
    case StabilityClass::parabolic_within_tol: return "parabolic-within-tol";
  }
  return "?";
}

struct Classification {
  double det{0.0};
  double trace{0.0};
  std::array<std::complex<double>, 2> eigenvalues;
  StabilityClass cls{StabilityClass::parabolic_within_tol};
};

inline StabilityClass classify_trace(double trace, double class_tol = 1e-6) {
  if (std::abs(trace) < 2.0 - class_tol) return StabilityClass::elliptic;
  if (std::abs(trace) > 2.0 + class_tol) return StabilityClass::hyperbolic;
  return StabilityClass::parabolic_within_tol;
}

inline Classification classify_jacobian(const Jacobian2& J, double class_tol = 1e-6) {
  Classification c;
  c.det = J.det();
  c.trace = J.trace();
  c.eigenvalues = J.eigenvalues();
  c.cls = classify_trace(c.trace, class_tol);
  return c;
}

inline Mapped<Classification> classify(const ModelParams& p, const WallPoint& w,
                                       double class_tol = 1e-6) {
  const auto J = jac_return_map(p, w);
  if (!J.ok()) return {{}, J.status};
  return {classify_jacobian(J.value, class_tol), MapStatus::ok};
}

struct FixedPointReport {
  WallPoint point;
  double residual{0.0};
  Classification classification;
  WallPoint basin_seed;
};

struct FixedPointSearch {
  std::vector<FixedPointReport> points;
  int seeds_total{0};
  int seeds_dropped{0};  // escaped the domain or failed to converge
};

struct SearchBox {
  double x_min, x_max;
  double y_min, y_max;
};

namespace detail {

// R(p) - p with the angular residual taken mod 2pi.
inline bool fixed_point_residual(const ModelParams& p, const WallPoint& w,
                                 double out[2]) {
  const auto r = return_map(p, w);
  if (!r.ok()) return false;
  out[0] = principal_angle(r.value.x - w.x);
  out[1] = r.value.y - w.y;
  return true;
}

}  // namespace detail

// Newton iteration (numeric Jacobian of the residual) seeded on a grid over
// the box; converged points are deduplicated at radius 10*tol in the product
// metric (angular mod 2pi, height absolute).
inline FixedPointSearch find_fixed_points(const ModelParams& p,
                                          const SearchBox& box, int grid_density,
                                          double tol = 1e-10) {
  FixedPointSearch out;
  const int nx = grid_density, ny = grid_density;
  for (int iy = 0; iy < ny; ++iy) {
    // seeds log-spaced in y (the interesting dynamics accumulates on y=0)
    const double ly0 = std::log(box.y_min), ly1 = std::log(box.y_max);
    const double y0 = std::exp(ly0 + (ly1 - ly0) * (iy + 0.5) / ny);
    for (int ix = 0; ix < nx; ++ix) {
      const double x0 = box.x_min + (box.x_max - box.x_min) * (ix + 0.5) / nx;
      ++out.seeds_total;
      WallPoint w{x0, y0};
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        double g[2];
        if (!detail::fixed_point_residual(p, w, g)) break;
        const double res = std::hypot(g[0], g[1]);
        if (res <= tol) { converged = true; break; }
        const double hx = 1e-8 * std::max(1.0, std::abs(w.x));
        const double hy = 1e-8 * std::max(w.y, 1e-12);
        double gx1[2], gx0[2], gy1[2], gy0[2];
        if (!detail::fixed_point_residual(p, {w.x + hx, w.y}, gx1) ||
            !detail::fixed_point_residual(p, {w.x - hx, w.y}, gx0) ||
            !detail::fixed_point_residual(p, {w.x, w.y + hy}, gy1) ||
            !detail::fixed_point_residual(p, {w.x, w.y - hy}, gy0))
          break;
        const double j11 = (gx1[0] - gx0[0]) / (2 * hx);
        const double j21 = (gx1[1] - gx0[1]) / (2 * hx);
        const double j12 = (gy1[0] - gy0[0]) / (2 * hy);
        const double j22 = (gy1[1] - gy0[1]) / (2 * hy);
        const double den = j11 * j22 - j12 * j21;
        if (den == 0.0) break;
        double dx = (g[0] * j22 - g[1] * j12) / den;
        double dy = (j11 * g[1] - j21 * g[0]) / den;
        // damping keeps y positive
        double lam = 1.0;
        while (w.y - lam * dy <= 0.0 && lam > 1e-6) lam *= 0.5;
        w.x -= lam * dx;
        w.y -= lam * dy;
        if (!(w.y > 0.0) || w.y > 1.0) break;
      }
      if (!converged) { ++out.seeds_dropped; continue; }
      double g[2];
      detail::fixed_point_residual(p, w, g);
      const double res = std::hypot(g[0], g[1]);
      bool dup = false;
      for (const auto& fp : out.points)
        if (circular_distance(fp.point.x, w.x) + std::abs(fp.point.y - w.y) <
            10.0 * tol)
          dup = true;
      if (dup) continue;
      const auto J = jac_return_map(p, w);
      if (!J.ok()) { ++out.seeds_dropped; continue; }
      FixedPointReport rep;
      rep.point = {principal_angle(w.x), w.y};
      rep.residual = res;
      rep.classification = classify_jacobian(J.value);
      rep.basin_seed = {x0, y0};
      out.points.push_back(rep);
    }
  }
  return out;
}

struct TraceInterval {
  double y_lo{0.0};
  double y_hi{0.0};
};

// Scans y logarithmically along the fiber at phase phi0 (x = phi0 + g1 ln y,
// so the phase entering the shear is exactly phi0) and returns the maximal
// intervals where |Tr DR| < 2. At a reversal fiber the trace vanishes as
// y -> 0, so an interval adjacent to the lower scan end must appear.
inline std::vector<TraceInterval> elliptic_strip(const ModelParams& p,
                                                 double phi0, double y_max,
                                                 int points = 1000,
                                                 double y_min = 1e-14) {
  std::vector<TraceInterval> intervals;
  if (!(y_max > y_min)) return intervals;
  const double llo = std::log(y_min), lhi = std::log(y_max);
  bool in_interval = false;
  double start = 0.0, last_y = 0.0;
  for (int i = 0; i < points; ++i) {
    const double y = std::exp(llo + (lhi - llo) * i / (points - 1));
    const double x = phi0 + p.g1 * std::log(y);
    const auto J = jac_return_map(p, {x, y}, /*boundary_eps=*/0.0);
    const bool ell = J.ok() && std::abs(J.value.trace()) < 2.0;
    if (ell && !in_interval) { in_interval = true; start = y; }
    if (!ell && in_interval) {
      intervals.push_back({start, last_y});
      in_interval = false;
    }
    last_y = y;
  }
  if (in_interval) intervals.push_back({start, last_y});
  return intervals;
}

struct StripSpec {
  int k{0};
  double x_min{0.0}, x_max{0.0};
  double y_lo{0.0}, y_hi{0.0};  // (y_{k+1}, y_k], ratio e^{-2pi/g1}

  static StripSpec make(const ModelParams& p, int k, double y_ref, double x_min,
                        double x_max) {
    StripSpec s;
    s.k = k;
    s.x_min = x_min;
    s.x_max = x_max;
    s.y_hi = y_ref * std::exp(-kTwoPi * k / p.g1);
    s.y_lo = s.y_hi * std::exp(-kTwoPi / p.g1);
    return s;
  }
};

struct BoundaryImage {
  int arc{0};  // 0 bottom, 1 top, 2 left, 3 right
  double s{0.0};
  WallPoint in;
  WallPoint out;
  bool escaped{false};
};

struct HorseshoeEvidence {
  bool crossing{false};
  std::string reason;  // non-empty when crossing is false
  double expansion_estimate{0.0};
  std::vector<BoundaryImage> evidence;
  // Heuristic Conley-Moser-style check on sampled boundary arcs; this is NOT
  // a computer-assisted proof.
  const char* method = "heuristic-boundary-sampling";
};

inline HorseshoeEvidence horseshoe_crossing(const ModelParams& p,
                                            const StripSpec& strip,
                                            int samples_per_arc = 1000) {
  HorseshoeEvidence ev;
  int escaped = 0, total = 0;
  double img_x_min = 1e300, img_x_max = -1e300;
  bool top_above = false, top_below = false;
  bool bot_above = false, bot_below = false;

  auto sample_arc = [&](int arc, double t) -> WallPoint {
    switch (arc) {
      case 0: return {strip.x_min + (strip.x_max - strip.x_min) * t, strip.y_lo};
      case 1: return {strip.x_min + (strip.x_max - strip.x_min) * t, strip.y_hi};
      case 2: return {strip.x_min,
                      strip.y_lo * std::pow(strip.y_hi / strip.y_lo, t)};
      default: return {strip.x_max,
                       strip.y_lo * std::pow(strip.y_hi / strip.y_lo, t)};
    }
  };

  for (int arc = 0; arc < 4; ++arc) {
    for (int i = 0; i < samples_per_arc; ++i) {
      const double t = static_cast<double>(i) / (samples_per_arc - 1);
      const WallPoint in = sample_arc(arc, t);
      const auto r = return_map(p, in);
      ++total;
      BoundaryImage bi;
      bi.arc = arc;
      bi.s = t;
      bi.in = in;
      if (!r.ok()) {
        bi.escaped = true;
        ++escaped;
      } else {
        bi.out = r.value;
        img_x_min = std::min(img_x_min, r.value.x);
        img_x_max = std::max(img_x_max, r.value.x);
        if (arc == 1) {
          top_above = top_above || r.value.y > strip.y_hi;
          top_below = top_below || r.value.y < strip.y_lo;
        }
        if (arc == 0) {
          bot_above = bot_above || r.value.y > strip.y_hi;
          bot_below = bot_below || r.value.y < strip.y_lo;
        }
      }
      ev.evidence.push_back(bi);
    }
  }

  if (escaped > total / 10) {
    ev.crossing = false;
    ev.reason = "escape";
  } else {
    const bool opposite_exit =
        (top_above && bot_below) || (top_below && bot_above);
    const bool covers_x = img_x_min <= strip.x_min && img_x_max >= strip.x_max;
    ev.crossing = opposite_exit && covers_x;
    if (!opposite_exit) ev.reason = "no-opposite-exit";
    else if (!covers_x) ev.reason = "x-extent-short";
  }

  // median singular-value ratio of DR over an interior sample grid
  std::vector<double> ratios;
  for (int iy = 0; iy < 16; ++iy) {
    const double y = strip.y_lo * std::pow(strip.y_hi / strip.y_lo,
                                           (iy + 0.5) / 16.0);
    for (int ix = 0; ix < 16; ++ix) {
      const double x = strip.x_min +
                       (strip.x_max - strip.x_min) * (ix + 0.5) / 16.0;
      const auto J = jac_return_map(p, {x, y}, /*boundary_eps=*/0.0);
      if (!J.ok()) continue;
      const auto& m = J.value;
      // singular values from the eigenvalues of J^T J
      const double g11 = m.a11 * m.a11 + m.a21 * m.a21;
      const double g22 = m.a12 * m.a12 + m.a22 * m.a22;
      const double g12 = m.a11 * m.a12 + m.a21 * m.a22;
      const double tr = g11 + g22;
      const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - (g11 * g22 - g12 * g12)));
      const double hi = tr / 2.0 + disc, lo = tr / 2.0 - disc;
      if (lo > 0.0) ratios.push_back(std::sqrt(hi / lo));
    }
  }
  if (!ratios.empty()) {
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2,
                     ratios.end());
    ev.expansion_estimate = ratios[ratios.size() / 2];
  }
  return ev;
}

}  // namespace bykov
