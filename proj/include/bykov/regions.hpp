#pragma once

// Parameter-region classifiers: the open region defined by the eigenvalue
// inequality (in_region_B), the bounded rationality test for gamma, and the
// consistency report pairing the region test with a brute-force reversal
// oracle on random parameter draws.

#include <cmath>
#include <cstdint>
#include <vector>

#include "bykov/maps.hpp"
#include "bykov/params.hpp"
#include "bykov/rng.hpp"

namespace bykov {

struct RegionBResult {
  bool inside{false};
  double lower{0.0};
  double middle{0.0};
  double upper{0.0};
};

// L = (a^2 - 1/a^2) 2 alpha1 / (C1 - sqrt(alpha1^2 + 4 C1^2))
// U = (a^2 - 1/a^2) 2 alpha1 / (C1 + sqrt(alpha1^2 + 4 C1^2))
// m = E2/alpha2 - a^2 C1/alpha1;  inside iff L < m < U.
inline RegionBResult in_region_B(const ModelParams& p) {
  const double a2 = p.global.a * p.global.a;
  const double f = (a2 - 1.0 / a2) * 2.0 * p.saddle.alpha1;
  const double d = std::sqrt(p.saddle.alpha1 * p.saddle.alpha1 +
                             4.0 * p.saddle.C1 * p.saddle.C1);
  RegionBResult r;
  r.lower = f / (p.saddle.C1 - d);
  r.upper = f / (p.saddle.C1 + d);
  r.middle = p.saddle.E2 / p.saddle.alpha2 - a2 * p.saddle.C1 / p.saddle.alpha1;
  r.inside = (r.lower < r.middle) && (r.middle < r.upper);
  return r;
}

struct RationalityReport {
  bool rational_found{false};
  std::int64_t p{0}, q{1};        // best approximation with q <= max_denominator
  double error{0.0};              // |gamma - p/q|
  std::vector<std::int64_t> continued_fraction;
  // This is a bounded test: floats cannot certify irrationality, only the
  // absence of a close rational below the denominator bound.
  const char* verdict() const {
    return rational_found ? "rational" : "no-rational-below-bound";
  }
};

// Continued-fraction expansion of gamma; reports the best rational
// approximation p/q (over convergents and semiconvergents) with
// q <= max_denominator and whether it lies within tol of gamma.
inline RationalityReport gamma_rationality(const ModelParams& params,
                                           std::int64_t max_denominator,
                                           double tol) {
  const double x = params.gamma;
  RationalityReport rep;
  std::int64_t p0 = 1, q0 = 0;
  std::int64_t p1 = static_cast<std::int64_t>(std::floor(x)), q1 = 1;
  rep.continued_fraction.push_back(p1);
  rep.p = p1;
  rep.q = 1;
  rep.error = std::abs(x - static_cast<double>(p1));

  auto consider = [&](std::int64_t p, std::int64_t q) {
    if (q < 1 || q > max_denominator) return;
    const double err = std::abs(x - static_cast<double>(p) / static_cast<double>(q));
    if (err < rep.error) {
      rep.p = p;
      rep.q = q;
      rep.error = err;
    }
  };

  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    if (frac < 1e-15) break;  // expansion terminated: gamma is (numerically) rational
    const double inv = 1.0 / frac;
    const double af = std::floor(inv);
    if (af > 9.0e15) break;
    const std::int64_t ai = static_cast<std::int64_t>(af);
    rep.continued_fraction.push_back(ai);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_denominator) {
      // semiconvergents a = 1..ai built on the previous pair
      for (std::int64_t a = 1; a < ai; ++a) {
        const std::int64_t qs = a * q1 + q0;
        if (qs > max_denominator) break;
        consider(a * p1 + p0, qs);
      }
      break;
    }
    consider(p2, q2);
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (q1 > max_denominator) break;
    frac = inv - af;
  }
  rep.rational_found = rep.error <= tol;
  return rep;
}

// Brute-force reversal oracle: sign change of the finite-differenced x2 lift
// of the composed segment image over phi in [0, pi), on `grid` points.
inline bool oracle_reversal_exists(const ModelParams& p, int grid = 10000) {
  // s = e^{-phi/g1}; dx2/dphi and dx2/ds swap sign consistently, so a sign
  // change of the phi-difference quotient marks a reversal.
  double prev_x = 0.0, prev_d = 0.0;
  bool have_prev = false, have_d = false;
  for (int i = 0; i <= grid; ++i) {
    const double phi = kPi * static_cast<double>(i) / grid;
    const double x = segment_image_log(p, 0.0, -phi / p.g1).x2;
    if (have_prev) {
      const double d = x - prev_x;
      if (have_d && d * prev_d < 0.0) return true;
      if (d != 0.0) {
        prev_d = d;
        have_d = true;
      }
    }
    prev_x = x;
    have_prev = true;
  }
  return false;
}

struct ConsistencyRow {
  int draw{0};
  double alpha1, C1, alpha2, E2, a;
  bool in_B{false};
  bool oracle_reversal{false};
};

struct ConsistencyReport {
  std::vector<ConsistencyRow> rows;
  double agreement_rate{0.0};
};

// Random draws: alpha1, C1, alpha2, E2 log-uniform over [0.1, 10] with the
// resonances enforced (E1 = 2 C1, C2 = 2 E2), a uniform in [1, 4]. Pairs the
// region classifier with the derivative oracle; no fixed expected agreement.
inline ConsistencyReport region_consistency_report(int sample_count,
                                                   std::uint64_t seed) {
  ConsistencyReport rep;
  rep.rows.resize(sample_count);
  SplitMix64 rng(seed);
  for (int i = 0; i < sample_count; ++i) {
    ConsistencyRow& row = rep.rows[i];
    row.draw = i;
    row.alpha1 = rng.log_uniform(0.1, 10.0);
    row.C1 = rng.log_uniform(0.1, 10.0);
    row.alpha2 = rng.log_uniform(0.1, 10.0);
    row.E2 = rng.log_uniform(0.1, 10.0);
    row.a = rng.uniform(1.0, 4.0);
  }
  int agree = 0;
  for (auto& row : rep.rows) {
    const ModelParams p =
        validate_params(row.alpha1, row.C1, 2.0 * row.C1, row.alpha2, row.E2,
                        2.0 * row.E2, row.a);
    row.in_B = in_region_B(p).inside;
    row.oracle_reversal = oracle_reversal_exists(p);
    if (row.in_B == row.oracle_reversal) ++agree;
  }
  rep.agreement_rate =
      sample_count > 0 ? static_cast<double>(agree) / sample_count : 0.0;
  return rep;
}

}  // namespace bykov
