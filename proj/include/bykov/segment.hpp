#pragma once

// Sampled curve traces on the sections: the image of a vertical segment under
// eta (checked against the closed form), iterated images under the return
// map, and spiral diagnostics for disk curves.

#include <algorithm>
#include <cmath>
#include <vector>

#include "bykov/maps.hpp"
#include "bykov/params.hpp"

namespace bykov {

struct CurveSample {
  double s{0.0};
  WallPoint point;  // lifted x
  double dxds{0.0};
  bool valid{true};
};

struct CurveTrace {
  std::vector<CurveSample> samples;
};

struct DiskSample {
  double s{0.0};
  DiskPoint point;  // lifted phi
  bool valid{true};
};

struct DiskTrace {
  std::vector<DiskSample> samples;
};

// Image of beta(s) = (x0, s) under eta, evaluated through BOTH the closed
// form and the composed maps; a disagreement beyond `tol` in the lift metric
// throws FormulaMismatch. Samples whose image leaves the section (y2 > 1)
// are flagged invalid but still carry the formula values.
inline CurveTrace segment_trace(const ModelParams& p, double x0,
                                const std::vector<double>& s_grid,
                                double tol = 1e-10) {
  CurveTrace trace;
  trace.samples.reserve(s_grid.size());
  for (double s : s_grid) {
    const SegmentImage closed = segment_image(p, x0, s);
    CurveSample cs;
    cs.s = s;
    cs.point = {closed.x2, closed.y2};
    cs.dxds = closed.dx2ds;
    cs.valid = closed.y2 <= 1.0;

    // composition path (formula evaluation, domain checks relaxed so the two
    // routes can be compared even where the point exits the section)
    const auto d1 = phi1(p, {x0, s});
    if (d1.ok()) {
      const auto d2 = psi12(p, d1.value);
      const double xc = d2.value.phi - p.g2 * std::log(d2.value.r);
      const double yc = d2.value.r * d2.value.r;
      const double delta =
          std::max(std::abs(xc - closed.x2), std::abs(yc - closed.y2));
      if (delta > tol) throw FormulaMismatch(s, delta);
    } else {
      cs.valid = false;
    }
    trace.samples.push_back(cs);
  }
  return trace;
}

namespace detail {

// Orbit survival through k half-returns; returns the pre-rotation image in
// Out(sigma2) at iterate k, or nullopt-style failure with the dead iterate.
struct IterResult {
  bool alive{false};
  int died_at{0};
  WallPoint out;  // eta image at iterate k (before the final rotation)
};

inline IterResult iterate_segment_point(const ModelParams& p, double x0,
                                        double s, int k) {
  WallPoint w{x0, s};
  for (int j = 1; j <= k; ++j) {
    const auto e = eta(p, w);
    if (!e.ok()) return {false, j, {}};
    if (j == k) return {true, 0, e.value};
    w = psi21(p, e.value);
  }
  return {false, k, {}};
}

}  // namespace detail

// Iterates the half-return on the segment. Samples that escape are
// discarded; boundaries of surviving runs are refined by bisection in s to
// resolution 1e-12 and each connected run is re-sampled (log-spaced) into its
// own trace. Output traces live in Out(sigma2) coordinates, before the final
// rotation, so the tangency search applies uniformly at every order.
// Throws ExtinctError if nothing survives.
inline std::vector<CurveTrace> iterated_segment_trace(
    const ModelParams& p, double x0, const std::vector<double>& s_grid, int k,
    int resample_per_piece = 256) {
  if (k < 1) throw std::invalid_argument("iterated_segment_trace: k >= 1");

  // earliest iterate at which everything is dead, for the Extinct report
  int max_survived = 0;
  std::vector<char> alive(s_grid.size(), 0);
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const auto r = detail::iterate_segment_point(p, x0, s_grid[i], k);
    alive[i] = r.alive ? 1 : 0;
    max_survived = std::max(max_survived, r.alive ? k : r.died_at - 1);
  }
  if (std::find(alive.begin(), alive.end(), 1) == alive.end())
    throw ExtinctError(max_survived);

  auto survives = [&](double s) {
    return detail::iterate_segment_point(p, x0, s, k).alive;
  };
  auto bisect_edge = [&](double s_dead, double s_alive) {
    // refine the survival boundary to 1e-12 in s
    while (std::abs(s_alive - s_dead) > 1e-12) {
      const double mid = 0.5 * (s_alive + s_dead);
      if (mid == s_alive || mid == s_dead) break;
      (survives(mid) ? s_alive : s_dead) = mid;
    }
    return s_alive;
  };

  std::vector<CurveTrace> pieces;
  std::size_t i = 0;
  while (i < s_grid.size()) {
    if (!alive[i]) { ++i; continue; }
    std::size_t j = i;
    while (j + 1 < s_grid.size() && alive[j + 1]) ++j;
    double lo = s_grid[i], hi = s_grid[j];
    if (i > 0) lo = bisect_edge(s_grid[i - 1], lo);
    if (j + 1 < s_grid.size()) hi = bisect_edge(s_grid[j + 1], hi);
    if (lo > hi) std::swap(lo, hi);

    const int n = std::max<int>(resample_per_piece, static_cast<int>(j - i + 1));
    CurveTrace piece;
    piece.samples.reserve(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int m = 0; m < n; ++m) {
      const double ls = llo + (lhi - llo) * m / (n - 1 > 0 ? n - 1 : 1);
      const double s = std::exp(ls);
      const auto r = detail::iterate_segment_point(p, x0, s, k);
      if (!r.alive) continue;  // refined edges keep runs connected; skip strays
      piece.samples.push_back({s, r.out, 0.0, true});
    }
    // numerical derivative of the lift along the piece
    auto& sm = piece.samples;
    for (std::size_t m = 0; m < sm.size(); ++m) {
      const std::size_t lo_i = m == 0 ? m : m - 1;
      const std::size_t hi_i = m + 1 == sm.size() ? m : m + 1;
      const double ds = sm[hi_i].s - sm[lo_i].s;
      sm[m].dxds = ds != 0.0 ? (sm[hi_i].point.x - sm[lo_i].point.x) / ds : 0.0;
    }
    if (!piece.samples.empty()) pieces.push_back(std::move(piece));
    i = j + 1;
  }
  if (pieces.empty()) throw ExtinctError(max_survived);
  return pieces;
}

struct SpiralDiagnostics {
  double winding{0.0};           // lift difference / 2pi
  double monotone_fraction{0.0}; // fraction of radius steps with the majority sign
  double radius_limit{0.0};      // radius estimate at the s -> 0 end
};

inline SpiralDiagnostics spiral_diagnostics(const DiskTrace& trace) {
  SpiralDiagnostics d;
  const auto& sm = trace.samples;
  if (sm.empty()) return d;
  d.winding = (sm.back().point.phi - sm.front().point.phi) / kTwoPi;

  // constant radius counts as monotone
  std::size_t inc = 0, dec = 0, flat = 0;
  for (std::size_t i = 1; i < sm.size(); ++i) {
    const double dr = sm[i].point.r - sm[i - 1].point.r;
    if (std::abs(dr) < 1e-15) ++flat;
    else if (dr > 0.0) ++inc;
    else ++dec;
  }
  const std::size_t steps = sm.size() - 1;
  d.monotone_fraction =
      steps > 0 ? static_cast<double>(std::max(inc, dec) + flat) / steps : 1.0;

  // limiting radius at the small-s end
  const bool front_small = sm.front().s <= sm.back().s;
  d.radius_limit = front_small ? sm.front().point.r : sm.back().point.r;
  return d;
}

// Phi1 image of the vertical segment (x0, s), s over [s_min, s_max]: the
// spiral whose winding is (g1/2pi) ln(s_max/s_min).
inline DiskTrace phi1_image_of_segment(const ModelParams& p, double x0,
                                       double s_min, double s_max, int n) {
  DiskTrace t;
  t.samples.reserve(n);
  const double llo = std::log(s_min), lhi = std::log(s_max);
  for (int i = 0; i < n; ++i) {
    const double s = std::exp(llo + (lhi - llo) * i / (n - 1));
    const auto d = phi1(p, {x0, s});
    t.samples.push_back({s, d.value, d.ok()});
  }
  return t;
}

}  // namespace bykov
