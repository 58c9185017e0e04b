#pragma once

// Intersections of the two invariant-manifold spirals in In(sigma2):
//   S1 = Phi2^{-1}(vertical stable segment in Out(sigma2))
//   S2 = Psi12 . Phi1(vertical unstable segment in In(sigma1))
// Both are marched as polylines in Cartesian disk coordinates; candidate
// crossings from bounding-box pruned segment pairs are refined by a 2-D
// secant/Newton iteration on the curve parameters.

#include <array>
#include <cmath>
#include <vector>

#include "bykov/maps.hpp"
#include "bykov/params.hpp"

namespace bykov {

struct SpiralIntersection {
  DiskPoint point;       // polar, principal angle
  double angle_between;  // in [0, pi/2]; ~0 flags tangential contact
  double s1{0.0}, s2{0.0};
};

struct SpiralSegmentSpec {
  double x{0.0};      // angular coordinate of the vertical segment
  double s_min{0.0};
  double s_max{1.0};
};

namespace detail {

using Vec2 = std::array<double, 2>;

inline Vec2 to_cart(const DiskPoint& d) {
  return {d.r * std::cos(d.phi), d.r * std::sin(d.phi)};
}

// S1(s): preimage under Phi2 of (x_s, y=s):  (r, phi) = (sqrt(s), x_s + (g2/2) ln s)
inline DiskPoint stable_spiral(const ModelParams& p, double xs, double s) {
  return {std::sqrt(s), xs + 0.5 * p.g2 * std::log(s)};
}

// S2(s): shear image of the Phi1 spiral of (x0, y=s)
inline DiskPoint unstable_spiral(const ModelParams& p, double x0, double s) {
  const auto d = phi1(p, {x0, s});
  return psi12(p, d.value).value;
}

inline bool segments_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                           const Vec2& q2, double& t, double& u) {
  const double d1x = p2[0] - p1[0], d1y = p2[1] - p1[1];
  const double d2x = q2[0] - q1[0], d2y = q2[1] - q1[1];
  const double den = d1x * d2y - d1y * d2x;
  if (den == 0.0) return false;
  const double ex = q1[0] - p1[0], ey = q1[1] - p1[1];
  t = (ex * d2y - ey * d2x) / den;
  u = (ex * d1y - ey * d1x) / den;
  return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
}

}  // namespace detail

inline std::vector<SpiralIntersection> spiral_intersections(
    const ModelParams& p, const SpiralSegmentSpec& stable,
    const SpiralSegmentSpec& unstable, int samples_per_turn = 720) {
  using detail::Vec2;

  auto march = [&](auto&& curve, const SpiralSegmentSpec& spec,
                   std::vector<double>& ss, std::vector<Vec2>& pts) {
    // sample uniformly in log s, densely enough for the requested angular
    // resolution of the faster-winding spiral
    const double llo = std::log(spec.s_min), lhi = std::log(spec.s_max);
    const double winding =
        std::max(std::abs(p.g1), 0.5 * std::abs(p.g2)) * (lhi - llo);
    const int n = std::max(64, static_cast<int>(std::abs(winding) / kTwoPi *
                                                samples_per_turn) + 2);
    ss.reserve(n);
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double s = std::exp(llo + (lhi - llo) * i / (n - 1));
      ss.push_back(s);
      pts.push_back(detail::to_cart(curve(s)));
    }
  };

  auto c1 = [&](double s) { return detail::stable_spiral(p, stable.x, s); };
  auto c2 = [&](double s) { return detail::unstable_spiral(p, unstable.x, s); };

  std::vector<double> s1, s2;
  std::vector<Vec2> a, b;
  march(c1, stable, s1, a);
  march(c2, unstable, s2, b);

  // radial annulus pruning: both spirals have monotone radius in s
  auto radius_range = [](const std::vector<Vec2>& v, std::size_t i) {
    const double r0 = std::hypot(v[i][0], v[i][1]);
    const double r1 = std::hypot(v[i + 1][0], v[i + 1][1]);
    return std::array<double, 2>{std::min(r0, r1), std::max(r0, r1)};
  };

  std::vector<SpiralIntersection> out;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const auto ra = radius_range(a, i);
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      const auto rb = radius_range(b, j);
      if (rb[0] > ra[1] + 1e-12 || ra[0] > rb[1] + 1e-12) continue;
      // bounding boxes
      if (std::min(a[i][0], a[i + 1][0]) > std::max(b[j][0], b[j + 1][0]) ||
          std::min(b[j][0], b[j + 1][0]) > std::max(a[i][0], a[i + 1][0]) ||
          std::min(a[i][1], a[i + 1][1]) > std::max(b[j][1], b[j + 1][1]) ||
          std::min(b[j][1], b[j + 1][1]) > std::max(a[i][1], a[i + 1][1]))
        continue;
      double t, u;
      if (!detail::segments_cross(a[i], a[i + 1], b[j], b[j + 1], t, u)) continue;

      // refine (sa, sb) with Newton on F(sa, sb) = c1(sa) - c2(sb) in R^2
      double sa = s1[i] * std::pow(s1[i + 1] / s1[i], t);
      double sb = s2[j] * std::pow(s2[j + 1] / s2[j], u);
      for (int it = 0; it < 60; ++it) {
        const Vec2 pa = detail::to_cart(c1(sa));
        const Vec2 pb = detail::to_cart(c2(sb));
        const double fx = pa[0] - pb[0], fy = pa[1] - pb[1];
        if (std::hypot(fx, fy) < 1e-12) break;
        const double ha = 1e-7 * sa, hb = 1e-7 * sb;
        const Vec2 pa1 = detail::to_cart(c1(sa + ha));
        const Vec2 pb1 = detail::to_cart(c2(sb + hb));
        const double j11 = (pa1[0] - pa[0]) / ha, j21 = (pa1[1] - pa[1]) / ha;
        const double j12 = -(pb1[0] - pb[0]) / hb, j22 = -(pb1[1] - pb[1]) / hb;
        const double den = j11 * j22 - j12 * j21;
        if (den == 0.0) break;
        sa -= (fx * j22 - fy * j12) / den;
        sb -= (j11 * fy - j21 * fx) / den;
        if (!(sa > 0.0) || !(sb > 0.0)) { sa = sb = -1.0; break; }
      }
      if (!(sa > 0.0) || !(sb > 0.0)) continue;
      const Vec2 pa = detail::to_cart(c1(sa));
      const Vec2 pb = detail::to_cart(c2(sb));
      if (std::hypot(pa[0] - pb[0], pa[1] - pb[1]) > 1e-10) continue;

      // angle between tangents
      const double ha = 1e-7 * sa, hb = 1e-7 * sb;
      const Vec2 ta1 = detail::to_cart(c1(sa + ha)), ta0 = detail::to_cart(c1(sa - ha));
      const Vec2 tb1 = detail::to_cart(c2(sb + hb)), tb0 = detail::to_cart(c2(sb - hb));
      const double ax = ta1[0] - ta0[0], ay = ta1[1] - ta0[1];
      const double bx = tb1[0] - tb0[0], by = tb1[1] - tb0[1];
      const double cross = std::abs(ax * by - ay * bx);
      const double na = std::hypot(ax, ay), nb = std::hypot(bx, by);
      double ang = 0.0;
      if (na > 0.0 && nb > 0.0)
        ang = std::asin(std::min(1.0, cross / (na * nb)));

      SpiralIntersection si;
      si.point = {std::hypot(pa[0], pa[1]), std::atan2(pa[1], pa[0])};
      si.angle_between = ang;
      si.s1 = sa;
      si.s2 = sb;
      // dedup against earlier finds
      bool dup = false;
      for (const auto& o : out)
        if (std::abs(o.s1 - si.s1) < 1e-8 * (o.s1 + si.s1) &&
            std::abs(o.s2 - si.s2) < 1e-8 * (o.s2 + si.s2))
          dup = true;
      if (!dup) out.push_back(si);
    }
  }
  return out;
}

}  // namespace bykov
