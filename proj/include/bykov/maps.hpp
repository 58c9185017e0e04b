#pragma once

// Cross-section maps of the model: the local maps Phi1/Phi2, the global
// transitions Psi12/Psi21, the half-return eta = Phi2 . Psi12 . Phi1 and the
// return map R = Psi21 . eta, with exact chain-rule Jacobians.
//
// Conventions:
//   Phi1 : In(sigma1) wall -> Out(sigma1) disk,   (x,y) -> (sqrt(y), x - g1 ln y)
//   Phi2 : In(sigma2) disk -> Out(sigma2) wall,   (r,phi) -> (phi - g2 ln r, r^2)
//   Psi12: disk shear (u,v) -> (a u, v/a) in Cartesian coordinates, expressed
//          in polar coordinates as r -> r sqrt(C(phi)), phi -> lift(phi)
//   Psi21: planar rotation about the transverse connection (0,0), acting on
//          the principal-value chart of the angular coordinate.

#include <cmath>

#include "bykov/core.hpp"
#include "bykov/params.hpp"

namespace bykov {

// C(phi) = a^2 cos^2(phi) + sin^2(phi)/a^2. Pi-periodic, in [1/a^2, a^2].
inline double shear_radius_factor(const ModelParams& p, double phi) {
  const double a2 = p.global.a * p.global.a;
  const double c = std::cos(phi), s = std::sin(phi);
  return a2 * c * c + s * s / a2;
}

// dC/dphi = -2 (a^2 - 1/a^2) sin(phi) cos(phi).
inline double shear_radius_factor_deriv(const ModelParams& p, double phi) {
  const double a2 = p.global.a * p.global.a;
  return -2.0 * (a2 - 1.0 / a2) * std::sin(phi) * std::cos(phi);
}

// Lift of the shear's angular action. Half-period decomposition
// k = floor((phi + pi/2)/pi), phitilde = phi - k pi in [-pi/2, pi/2);
// the lift satisfies lift(phi + pi) = lift(phi) + pi and preserves quadrants.
inline double shear_angle_lift(const ModelParams& p, double phi) {
  const double k = std::floor((phi + kPi / 2.0) / kPi);
  const double pt = phi - k * kPi;
  return k * kPi + std::atan2(std::sin(pt) / p.global.a, p.global.a * std::cos(pt));
}

// d lift/dphi = 1/C(phi).
inline double shear_angle_lift_deriv(const ModelParams& p, double phi) {
  return 1.0 / shear_radius_factor(p, phi);
}

struct GeometryFunctions {
  double C;          // C(phi)
  double Phi_lift;   // lift of the shear angle
  double A_printed;  // E1 a^2 cos^2 + (E1/a^2) sin^2 + alpha1 (a^2-1/a^2) sin cos
  double A_derived;  // (E1/2) C(phi) + alpha1 (a^2-1/a^2) sin cos
};

// Both candidate reversal functionals are exposed: A_printed as it appears in
// the source formulas and A_derived as obtained by differentiating the
// composed maps. They differ; formula_discrepancy_report tabulates how.
inline GeometryFunctions geometry_functions(const ModelParams& p, double phi) {
  const double a2 = p.global.a * p.global.a;
  const double c = std::cos(phi), s = std::sin(phi);
  const double C = a2 * c * c + s * s / a2;
  const double cross = p.saddle.alpha1 * (a2 - 1.0 / a2) * s * c;
  GeometryFunctions g;
  g.C = C;
  g.Phi_lift = shear_angle_lift(p, phi);
  g.A_printed = p.saddle.E1 * a2 * c * c + p.saddle.E1 / a2 * s * s + cross;
  g.A_derived = 0.5 * p.saddle.E1 * C + cross;
  return g;
}

inline Mapped<DiskPoint> phi1(const ModelParams& p, const WallPoint& w) {
  if (!(w.y > 0.0) || w.y > 1.0) return {{}, MapStatus::escape_phi1};
  return {{std::sqrt(w.y), w.x - p.g1 * std::log(w.y)}, MapStatus::ok};
}

inline Mapped<WallPoint> phi2(const ModelParams& p, const DiskPoint& d) {
  if (!(d.r > 0.0) || d.r > 1.0) return {{}, MapStatus::escape_phi2};
  return {{d.phi - p.g2 * std::log(d.r), d.r * d.r}, MapStatus::ok};
}

inline Mapped<DiskPoint> psi12(const ModelParams& p, const DiskPoint& d) {
  if (!(d.r > 0.0)) return {{}, MapStatus::escape_psi12};
  const double C = shear_radius_factor(p, d.phi);
  return {{d.r * std::sqrt(C), shear_angle_lift(p, d.phi)}, MapStatus::ok};
}

inline WallPoint psi21(const ModelParams& p, const WallPoint& w) {
  const double xp = principal_angle(w.x);
  const double c = std::cos(p.global.rotation), s = std::sin(p.global.rotation);
  return {c * xp - s * w.y, s * xp + c * w.y};
}

// eta = Phi2 . Psi12 . Phi1 with the angle lift threaded through.
inline Mapped<WallPoint> eta(const ModelParams& p, const WallPoint& w) {
  const auto d1 = phi1(p, w);
  if (!d1.ok()) return {{}, d1.status};
  const auto d2 = psi12(p, d1.value);
  if (!d2.ok()) return {{}, d2.status};
  const auto w2 = phi2(p, d2.value);
  if (!w2.ok()) return {{}, w2.status};
  return w2;
}

// R = Psi21 . eta.
inline Mapped<WallPoint> return_map(const ModelParams& p, const WallPoint& w) {
  const auto e = eta(p, w);
  if (!e.ok()) return e;
  return {psi21(p, e.value), MapStatus::ok};
}

// --- Analytic Jacobians (chain rule over the explicit maps) ---------------

inline Jacobian2 jac_phi1(const ModelParams& p, const WallPoint& w) {
  // rows (r, phi), columns (x, y)
  return {0.0, 0.5 / std::sqrt(w.y), 1.0, -p.g1 / w.y};
}

inline Jacobian2 jac_psi12(const ModelParams& p, const DiskPoint& d) {
  const double C = shear_radius_factor(p, d.phi);
  const double Cp = shear_radius_factor_deriv(p, d.phi);
  const double sC = std::sqrt(C);
  // rows (r_out, phi_out), columns (r, phi)
  return {sC, d.r * Cp / (2.0 * sC), 0.0, 1.0 / C};
}

inline Jacobian2 jac_phi2(const ModelParams& p, const DiskPoint& d) {
  // rows (x, y), columns (r, phi)
  return {-p.g2 / d.r, 1.0, 2.0 * d.r, 0.0};
}

inline Jacobian2 jac_psi21(const ModelParams& p) {
  const double c = std::cos(p.global.rotation), s = std::sin(p.global.rotation);
  return {c, -s, s, c};
}

// det(D eta) = C(phi) * lift'(phi) = 1 analytically; the product below
// realizes it through the chain rule.
inline Mapped<Jacobian2> jac_eta(const ModelParams& p, const WallPoint& w,
                                 double boundary_eps = 1e-9) {
  if (!(w.y > 0.0) || w.y > 1.0) return {{}, MapStatus::escape_phi1};
  if (w.y < boundary_eps || w.y > 1.0 - boundary_eps)
    return {{}, MapStatus::near_singular};
  const auto d1 = phi1(p, w);
  const auto d2 = psi12(p, d1.value);
  if (d2.value.r > 1.0) return {{}, MapStatus::escape_phi2};
  const Jacobian2 J = jac_phi2(p, d2.value) * jac_psi12(p, d1.value) * jac_phi1(p, w);
  return {J, MapStatus::ok};
}

inline Mapped<Jacobian2> jac_return_map(const ModelParams& p, const WallPoint& w,
                                        double boundary_eps = 1e-9) {
  auto J = jac_eta(p, w, boundary_eps);
  if (!J.ok()) return J;
  return {jac_psi21(p) * J.value, MapStatus::ok};
}

enum class MapId { phi1, phi2, psi12, psi21, eta, return_map };

// Dispatch wrapper for the wall-coordinate maps. phi2/psi12 take the
// WallPoint fields as (r, phi).
inline Mapped<Jacobian2> jacobian(const ModelParams& p, MapId id,
                                  const WallPoint& w, double boundary_eps = 1e-9) {
  switch (id) {
    case MapId::phi1:
      if (!(w.y > 0.0) || w.y > 1.0) return {{}, MapStatus::escape_phi1};
      if (w.y < boundary_eps) return {{}, MapStatus::near_singular};
      return {jac_phi1(p, w), MapStatus::ok};
    case MapId::phi2: {
      const DiskPoint d{w.x, w.y};
      if (!(d.r > 0.0) || d.r > 1.0) return {{}, MapStatus::escape_phi2};
      if (d.r < boundary_eps) return {{}, MapStatus::near_singular};
      return {jac_phi2(p, d), MapStatus::ok};
    }
    case MapId::psi12: {
      const DiskPoint d{w.x, w.y};
      if (!(d.r > 0.0)) return {{}, MapStatus::escape_psi12};
      return {jac_psi12(p, d), MapStatus::ok};
    }
    case MapId::psi21:
      return {jac_psi21(p), MapStatus::ok};
    case MapId::eta:
      return jac_eta(p, w, boundary_eps);
    case MapId::return_map:
      return jac_return_map(p, w, boundary_eps);
  }
  return {{}, MapStatus::near_singular};
}

// --- Closed-form segment image (log-parametrized) --------------------------
//
// For the vertical segment beta(s) = (x0, s) in In(sigma1), with L = ln s:
//   phi(L)  = -g1 L + x0
//   y2(L)   = e^L C(phi)
//   x2(L)   = -(g2/2) (L + ln C(phi)) + lift(phi)
// Working in L avoids underflow for deep reversal indices.

struct SegmentImage {
  double x2;     // lifted angular coordinate
  double y2;     // height (may exceed 1; validity checked by the caller)
  double phi;    // phase lift entering the shear
  double dx2ds;  // analytic derivative of the lift w.r.t. s
};

inline SegmentImage segment_image_log(const ModelParams& p, double x0, double log_s) {
  const double phi = -p.g1 * log_s + x0;
  const double C = shear_radius_factor(p, phi);
  const double a2 = p.global.a * p.global.a;
  SegmentImage out;
  out.phi = phi;
  out.y2 = std::exp(log_s) * C;
  out.x2 = -0.5 * p.g2 * (log_s + std::log(C)) + shear_angle_lift(p, phi);
  const double sc = std::sin(phi) * std::cos(phi);
  const double s = std::exp(log_s);
  out.dx2ds = (s > 0.0)
                  ? -(1.0 / s) * (0.5 * p.g2 +
                                  (p.g1 / C) * (p.g2 * (a2 - 1.0 / a2) * sc + 1.0))
                  : 0.0;
  return out;
}

inline SegmentImage segment_image(const ModelParams& p, double x0, double s) {
  return segment_image_log(p, x0, std::log(s));
}

// Zero functional of dx2/ds as a function of the phase:
//   g2/2 + (g1/C(phi)) (g2 (a^2 - 1/a^2) sin phi cos phi + 1).
// Its roots are the reversal phases.
inline double reversal_functional(const ModelParams& p, double phi) {
  const double C = shear_radius_factor(p, phi);
  const double a2 = p.global.a * p.global.a;
  return 0.5 * p.g2 +
         (p.g1 / C) * (p.g2 * (a2 - 1.0 / a2) * std::sin(phi) * std::cos(phi) + 1.0);
}

}  // namespace bykov
