#pragma once

// Basic geometric types and angle bookkeeping for the cross-section maps.
// All angular coordinates are stored as lifts (unbounded reals); reduction
// mod 2pi happens only for display and for equidistribution statistics.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace bykov {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Point on a cylinder-wall section: x is the angular lift, y the height.
struct WallPoint {
  double x{0.0};
  double y{0.0};
};

// Point on a disk section in polar coordinates; phi is a lift.
struct DiskPoint {
  double r{0.0};
  double phi{0.0};
};

// 2x2 matrix of partial derivatives, row = output coordinate, column = input.
struct Jacobian2 {
  double a11{0.0}, a12{0.0}, a21{0.0}, a22{0.0};

  double det() const { return a11 * a22 - a12 * a21; }
  double trace() const { return a11 + a22; }

  friend Jacobian2 operator*(const Jacobian2& l, const Jacobian2& r) {
    return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
            l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
  }

  std::array<std::complex<double>, 2> eigenvalues() const {
    const double t = trace();
    const double d = det();
    const std::complex<double> disc =
        std::sqrt(std::complex<double>(t * t - 4.0 * d, 0.0));
    return {0.5 * (t + disc), 0.5 * (t - disc)};
  }
};

// Which map of the composition rejected the point.
enum class MapStatus { ok, escape_phi1, escape_psi12, escape_phi2, near_singular };

inline const char* to_string(MapStatus s) {
  switch (s) {
    case MapStatus::ok: return "ok";
    case MapStatus::escape_phi1: return "phi1";
    case MapStatus::escape_psi12: return "psi12";
    case MapStatus::escape_phi2: return "phi2";
    case MapStatus::near_singular: return "near-singular";
  }
  return "?";
}

// Value-or-escape result for the partial section maps.
template <class T>
struct Mapped {
  T value{};
  MapStatus status{MapStatus::ok};
  bool ok() const { return status == MapStatus::ok; }
};

// Principal value of an angle in (-pi, pi].
inline double principal_angle(double x) {
  double v = std::remainder(x, kTwoPi);
  if (v <= -kPi) v += kTwoPi;
  return v;
}

// Reduce to [0, 2pi).
inline double reduce_mod_2pi(double x) {
  double v = std::fmod(x, kTwoPi);
  if (v < 0.0) v += kTwoPi;
  return v;
}

// Distance between two angles on the circle, in [0, pi].
inline double circular_distance(double a, double b) {
  return std::abs(principal_angle(a - b));
}

struct FormulaMismatch : std::runtime_error {
  double s;
  double delta;
  FormulaMismatch(double s_, double delta_)
      : std::runtime_error("closed form and composition disagree at s=" +
                           std::to_string(s_) + " by " + std::to_string(delta_)),
        s(s_), delta(delta_) {}
};

struct ExtinctError : std::runtime_error {
  int iterate;
  explicit ExtinctError(int k)
      : std::runtime_error("no samples survive past iterate " + std::to_string(k)),
        iterate(k) {}
};

struct NoReversals : std::runtime_error {
  NoReversals() : std::runtime_error("no reversal phases for these parameters") {}
};

struct EmptyDataset : std::runtime_error {
  EmptyDataset() : std::runtime_error("empty dataset") {}
};

}  // namespace bykov
