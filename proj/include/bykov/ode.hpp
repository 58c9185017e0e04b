#pragma once

// Adaptive Dormand-Prince RK5(4) integration of 3-D vector fields with PI
// step-size control, radius-escape termination, and event location by
// bisection on the accepted step (cubic Hermite interpolant).

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace bykov {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double c, const Vec3& a) {
  return {c * a[0], c * a[1], c * a[2]};
}
inline double norm(const Vec3& a) {
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

struct FieldSpec {
  std::string name;
  std::function<Vec3(const Vec3&)> evaluate;
  std::map<std::string, double> parameters;
};

enum class Termination { reached_t_end, escaped_radius, step_underflow };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::reached_t_end: return "reached-t-end";
    case Termination::escaped_radius: return "escaped-radius";
    case Termination::step_underflow: return "step-underflow";
  }
  return "?";
}

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec3> states;
  Termination termination{Termination::reached_t_end};
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DP5Step {
  Vec3 y5;          // 5th-order solution
  double err{0.0};  // scaled error norm
  Vec3 k_last;      // FSAL stage = f(t+h, y5)
};

inline DP5Step dp5_step(const std::function<Vec3(const Vec3&)>& f, const Vec3& y,
                        const Vec3& k1, double h, double rel_tol, double abs_tol) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const Vec3 k2 = f(y + h * (a21 * k1));
  const Vec3 k3 = f(y + h * (a31 * k1 + a32 * k2));
  const Vec3 k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const Vec3 k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const Vec3 k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));

  DP5Step out;
  out.y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  out.k_last = f(out.y5);
  const Vec3 ev = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                       e7 * out.k_last);
  double err = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(out.y5[i]));
    const double r = ev[i] / sc;
    err += r * r;
  }
  out.err = std::sqrt(err / 3.0);
  return out;
}

// Cubic Hermite interpolation on an accepted step.
inline Vec3 hermite(const Vec3& y0, const Vec3& f0, const Vec3& y1,
                    const Vec3& f1, double h, double theta) {
  const double t = theta, t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y0 + (h * h10) * f0 + h01 * y1 + (h * h11) * f1;
}

}  // namespace detail

struct IntegrateOptions {
  double rel_tol{1e-10};
  double abs_tol{1e-12};
  double max_radius{1e6};
  // optional event: stop when g crosses from negative to non-negative,
  // located by bisection on the Hermite interpolant to time tolerance
  std::function<double(const Vec3&)> event;
  double event_time_tol{1e-10};
};

// Integrates from t=0 to t=t_end (either sign). Records accepted steps.
inline Trajectory integrate(const FieldSpec& field, const Vec3& x0, double t_end,
                            const IntegrateOptions& opt = {}) {
  Trajectory traj;
  const double dir = t_end >= 0.0 ? 1.0 : -1.0;
  auto f = [&](const Vec3& y) { return dir * field.evaluate(y); };
  const double T = std::abs(t_end);

  double t = 0.0;
  Vec3 y = x0;
  traj.times.push_back(0.0);
  traj.states.push_back(y);
  if (norm(y) >= opt.max_radius) {
    traj.termination = Termination::escaped_radius;
    return traj;
  }
  if (T == 0.0) return traj;

  Vec3 k1 = f(y);
  double h = std::min(1e-3, T);
  constexpr double kSafety = 0.9, kMinScale = 0.2, kMaxScale = 5.0;
  constexpr double kAlpha = 0.7 / 5.0, kBeta = 0.4 / 5.0;  // PI controller
  double err_prev = 1.0;

  while (t < T) {
    h = std::min(h, T - t);
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      traj.termination = Termination::step_underflow;
      return traj;
    }
    const auto st = detail::dp5_step(f, y, k1, h, opt.rel_tol, opt.abs_tol);
    if (st.err > 1.0) {
      const double scale = std::max(
          kMinScale, kSafety * std::pow(st.err, -1.0 / 5.0));
      h *= scale;
      continue;
    }
    // accepted
    const Vec3 y_prev = y;
    const Vec3 k_prev = k1;
    const double t_prev = t;
    t += h;
    y = st.y5;

    auto record = [&](double tt, const Vec3& yy) {
      traj.times.push_back(dir * tt);
      traj.states.push_back(yy);
    };

    // radius escape within the step: bisect norm(y)-max_radius
    if (norm(y) >= opt.max_radius) {
      double lo = 0.0, hi = 1.0;
      while ((hi - lo) * h > opt.event_time_tol) {
        const double mid = 0.5 * (lo + hi);
        const Vec3 ym = detail::hermite(y_prev, k_prev, y, st.k_last, h, mid);
        (norm(ym) >= opt.max_radius ? hi : lo) = mid;
      }
      record(t_prev + hi * h, detail::hermite(y_prev, k_prev, y, st.k_last, h, hi));
      traj.termination = Termination::escaped_radius;
      return traj;
    }
    if (opt.event) {
      const double g0 = opt.event(y_prev), g1v = opt.event(y);
      if (g0 < 0.0 && g1v >= 0.0) {
        double lo = 0.0, hi = 1.0;
        while ((hi - lo) * h > opt.event_time_tol) {
          const double mid = 0.5 * (lo + hi);
          const Vec3 ym = detail::hermite(y_prev, k_prev, y, st.k_last, h, mid);
          (opt.event(ym) >= 0.0 ? hi : lo) = mid;
        }
        record(t_prev + hi * h, detail::hermite(y_prev, k_prev, y, st.k_last, h, hi));
        traj.termination = Termination::reached_t_end;
        return traj;
      }
    }
    record(t, y);
    k1 = st.k_last;

    const double err = std::max(st.err, 1e-10);
    double scale = kSafety * std::pow(err, -kAlpha) * std::pow(err_prev, kBeta);
    scale = std::min(kMaxScale, std::max(kMinScale, scale));
    h *= scale;
    err_prev = err;
  }
  traj.termination = Termination::reached_t_end;
  return traj;
}

}  // namespace bykov
