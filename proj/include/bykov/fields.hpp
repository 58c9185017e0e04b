#pragma once

// Concrete divergence-free fields (Michelson system, linear saddle-focus
// realizations), equilibrium spectra via the characteristic cubic, and the
// time-delay function with spike detection.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "bykov/ode.hpp"
#include "bykov/params.hpp"
#include "bykov/rng.hpp"

namespace bykov {

// c_K = 15 sqrt(22/19^3), the Michelson parameter singled out in the
// Kuramoto-Sivashinsky literature.
inline const double kMichelsonCK = 15.0 * std::sqrt(22.0 / (19.0 * 19.0 * 19.0));

inline FieldSpec michelson(double c) {
  FieldSpec f;
  f.name = "michelson";
  f.parameters = {{"c", c}};
  const double c2 = c * c;
  f.evaluate = [c2](const Vec3& v) -> Vec3 {
    return {v[1], v[2], c2 - v[1] - 0.5 * v[0] * v[0]};
  };
  return f;
}

enum class WhichSaddle { sigma1, sigma2 };

// Cartesian realization (u = rho cos th, v = rho sin th, z) of the linear
// cylindrical flows: sigma1 has rho' = -C1 rho, th' = alpha1, z' = E1 z;
// sigma2 has rho' = E2 rho, th' = alpha2, z' = -C2 z.
inline FieldSpec linear_saddle_field(const SaddleParams& s, WhichSaddle which) {
  FieldSpec f;
  if (which == WhichSaddle::sigma1) {
    f.name = "linear-saddle-sigma1";
    f.parameters = {{"alpha", s.alpha1}, {"radial", -s.C1}, {"axial", s.E1}};
  } else {
    f.name = "linear-saddle-sigma2";
    // opposite chirality: the angular velocity carries a minus sign
    f.parameters = {{"alpha", -s.alpha2}, {"radial", s.E2}, {"axial", -s.C2}};
  }
  const double radial = f.parameters["radial"];
  const double alpha = f.parameters["alpha"];
  const double axial = f.parameters["axial"];
  f.evaluate = [radial, alpha, axial](const Vec3& v) -> Vec3 {
    return {radial * v[0] - alpha * v[1], alpha * v[0] + radial * v[1],
            axial * v[2]};
  };
  return f;
}

struct SampleBox {
  Vec3 lo{-1.0, -1.0, -1.0};
  Vec3 hi{1.0, 1.0, 1.0};
};

// Max |div F| by central differences over uniform random samples in the box.
inline double divergence_max(const FieldSpec& field, const SampleBox& box,
                             int n_samples, std::uint64_t seed = 12345) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    Vec3 x;
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) {
      x[i] = rng.uniform(box.lo[i], box.hi[i]);
      scale = std::max(scale, std::abs(x[i]));
    }
    const double h = 1e-6 * std::max(1.0, scale);
    double div = 0.0;
    for (int i = 0; i < 3; ++i) {
      Vec3 xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      div += (field.evaluate(xp)[i] - field.evaluate(xm)[i]) / (2.0 * h);
    }
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

struct EquilibriumReport {
  Vec3 location;
  std::array<std::complex<double>, 3> eigenvalues;
  int morse_index{0};
  std::optional<SaddleParams> saddle_params_estimate;  // empty: not a saddle-focus
};

namespace detail {

// Roots of lambda^3 + p2 lambda^2 + p1 lambda + p0 via the zero-trace shift
// and the trigonometric/Cardano method.
inline std::array<std::complex<double>, 3> cubic_roots(double p2, double p1,
                                                       double p0) {
  // depressed cubic t^3 + pt + q with lambda = t - p2/3
  const double sh = p2 / 3.0;
  const double p = p1 - p2 * p2 / 3.0;
  const double q = p0 - p1 * p2 / 3.0 + 2.0 * p2 * p2 * p2 / 27.0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  std::array<std::complex<double>, 3> t;
  if (disc >= 0.0) {
    const double sd = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sd);
    const double v = std::cbrt(-q / 2.0 - sd);
    const double real = u + v;
    t[0] = real;
    t[1] = {-real / 2.0, std::sqrt(3.0) / 2.0 * (u - v)};
    t[2] = std::conj(t[1]);
  } else {
    // three real roots
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double theta =
        std::acos(std::clamp(3.0 * q / (p * m), -1.0, 1.0)) / 3.0;
    for (int k = 0; k < 3; ++k)
      t[k] = m * std::cos(theta - 2.0 * kPi * k / 3.0);
  }
  for (auto& r : t) r -= sh;
  // polish each root with a couple of Newton steps on the original cubic
  for (auto& r : t) {
    for (int it = 0; it < 3; ++it) {
      const auto f = ((r + p2) * r + p1) * r + p0;
      const auto df = (3.0 * r + 2.0 * p2) * r + p1;
      if (std::abs(df) == 0.0) break;
      r -= f / df;
    }
  }
  return t;
}

inline bool jacobian3(const FieldSpec& f, const Vec3& x, double J[3][3]) {
  double scale = 1.0;
  for (int i = 0; i < 3; ++i) scale = std::max(scale, std::abs(x[i]));
  // near the cube root of machine epsilon: balances truncation and roundoff
  const double h = 6e-6 * scale;
  for (int j = 0; j < 3; ++j) {
    Vec3 xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const Vec3 fp = f.evaluate(xp), fm = f.evaluate(xm);
    for (int i = 0; i < 3; ++i) J[i][j] = (fp[i] - fm[i]) / (2.0 * h);
  }
  return true;
}

inline bool solve3(const double A[3][3], const double b[3], double x[3]) {
  double M[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
    M[i][3] = b[i];
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
    if (M[piv][c] == 0.0) return false;
    if (piv != c)
      for (int j = c; j < 4; ++j) std::swap(M[piv][j], M[c][j]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double fac = M[r][c] / M[c][c];
      for (int j = c; j < 4; ++j) M[r][j] -= fac * M[c][j];
    }
  }
  for (int i = 0; i < 3; ++i) x[i] = M[i][3] / M[i][i];
  return true;
}

}  // namespace detail

// Damped Newton from each seed; converged roots are deduplicated and
// classified through the characteristic cubic of the numeric Jacobian.
// Seeds that fail to converge are silently dropped.
inline std::vector<EquilibriumReport> equilibria_with_spectrum(
    const FieldSpec& field, const std::vector<Vec3>& seeds, double tol = 1e-12) {
  std::vector<EquilibriumReport> out;
  for (const Vec3& seed : seeds) {
    Vec3 x = seed;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const Vec3 fx = field.evaluate(x);
      if (norm(fx) <= tol) { converged = true; break; }
      double J[3][3], dx[3];
      detail::jacobian3(field, x, J);
      const double b[3] = {fx[0], fx[1], fx[2]};
      if (!detail::solve3(J, b, dx)) break;
      // backtracking on the residual norm
      double lam = 1.0;
      const double f0 = norm(fx);
      for (int bt = 0; bt < 30; ++bt) {
        const Vec3 trial{x[0] - lam * dx[0], x[1] - lam * dx[1],
                         x[2] - lam * dx[2]};
        if (norm(field.evaluate(trial)) < f0) { x = trial; break; }
        lam *= 0.5;
        if (bt == 29) { x = trial; }
      }
    }
    if (!converged) continue;
    bool dup = false;
    for (const auto& r : out)
      if (norm(r.location - x) < 1e-8 * std::max(1.0, norm(x))) dup = true;
    if (dup) continue;

    double J[3][3];
    detail::jacobian3(field, x, J);
    const double tr = J[0][0] + J[1][1] + J[2][2];
    const double m01 = J[1][1] * J[2][2] - J[1][2] * J[2][1];
    const double m02 = J[0][0] * J[2][2] - J[0][2] * J[2][0];
    const double m03 = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const double det = J[0][0] * m01 - J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                       J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);

    EquilibriumReport rep;
    rep.location = x;
    // char poly lambda^3 - tr lambda^2 + (sum of principal minors) lambda - det
    rep.eigenvalues = detail::cubic_roots(-tr, m01 + m02 + m03, -det);
    for (const auto& ev : rep.eigenvalues)
      if (ev.real() > 0.0) ++rep.morse_index;

    // saddle-focus when spectrum is one real + one complex-conjugate pair
    int real_idx = -1;
    for (int i = 0; i < 3; ++i)
      if (std::abs(rep.eigenvalues[i].imag()) < 1e-9) real_idx = i;
    int n_real = 0;
    for (const auto& ev : rep.eigenvalues)
      if (std::abs(ev.imag()) < 1e-9) ++n_real;
    if (n_real == 1 && real_idx >= 0) {
      const auto real_ev = rep.eigenvalues[real_idx];
      const auto pair = rep.eigenvalues[(real_idx + 1) % 3];
      SaddleParams sp{};
      if (real_ev.real() < 0.0 && pair.real() > 0.0) {
        // sigma2 shape: E2 +- alpha2 i, -C2
        sp.E2 = pair.real();
        sp.alpha2 = std::abs(pair.imag());
        sp.C2 = -real_ev.real();
      } else if (real_ev.real() > 0.0 && pair.real() < 0.0) {
        // sigma1 shape: -C1 +- alpha1 i, E1
        sp.C1 = -pair.real();
        sp.alpha1 = std::abs(pair.imag());
        sp.E1 = real_ev.real();
      }
      rep.saddle_params_estimate = sp;
    }
    out.push_back(rep);
  }
  return out;
}

struct TimeDelaySample {
  Vec3 x0;
  double T_plus{0.0};
  double T_minus{0.0};
  bool bounded_plus{false};   // true: never escaped within t_max
  bool bounded_minus{false};
  bool underflow_plus{false};
  bool underflow_minus{false};
  double r0{0.0};
  double r{0.0};
};

inline TimeDelaySample time_delay(const FieldSpec& field, const Vec3& x0,
                                  double r, double t_max,
                                  double rel_tol = 1e-10, double abs_tol = 1e-12) {
  TimeDelaySample sample;
  sample.x0 = x0;
  sample.r0 = norm(x0);
  sample.r = r;
  if (sample.r0 >= r) return sample;  // already outside: T = 0 both ways

  IntegrateOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = abs_tol;
  opt.max_radius = r;

  auto run = [&](double t_end, double& T, bool& bounded, bool& underflow) {
    const Trajectory traj = integrate(field, x0, t_end, opt);
    switch (traj.termination) {
      case Termination::escaped_radius:
        T = std::abs(traj.times.back());
        break;
      case Termination::reached_t_end:
        T = t_max;
        bounded = true;
        break;
      case Termination::step_underflow:
        T = std::abs(traj.times.back());
        underflow = true;
        break;
    }
  };
  run(t_max, sample.T_plus, sample.bounded_plus, sample.underflow_plus);
  run(-t_max, sample.T_minus, sample.bounded_minus, sample.underflow_minus);
  return sample;
}

struct TimeDelayProfile {
  std::vector<TimeDelaySample> samples;
  std::vector<int> spikes_plus;   // indices of local maxima of T_plus
  std::vector<int> spikes_minus;
};

// N equally spaced samples on [p0, p1]; a spike is a sample exceeding both
// neighbours by `spike_factor`.
inline TimeDelayProfile time_delay_scan(const FieldSpec& field, const Vec3& p0,
                                        const Vec3& p1, int N, double r,
                                        double t_max, double spike_factor = 2.0,
                                        double rel_tol = 1e-10,
                                        double abs_tol = 1e-12) {
  TimeDelayProfile prof;
  prof.samples.reserve(N);
  for (int i = 0; i < N; ++i) {
    const double t = N > 1 ? static_cast<double>(i) / (N - 1) : 0.0;
    const Vec3 x = p0 + t * (p1 - p0);
    prof.samples.push_back(time_delay(field, x, r, t_max, rel_tol, abs_tol));
  }
  auto find_spikes = [&](auto&& get, std::vector<int>& idx) {
    for (int i = 1; i + 1 < N; ++i) {
      const double v = get(prof.samples[i]);
      if (v > spike_factor * get(prof.samples[i - 1]) &&
          v > spike_factor * get(prof.samples[i + 1]))
        idx.push_back(i);
    }
  };
  find_spikes([](const TimeDelaySample& s) { return s.T_plus; }, prof.spikes_plus);
  find_spikes([](const TimeDelaySample& s) { return s.T_minus; }, prof.spikes_minus);
  return prof;
}

}  // namespace bykov
