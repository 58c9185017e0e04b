#pragma once

// Reversal points of the image curve eta(beta(s)): phase roots, the geometric
// sequence s_n and its arithmetic progression in the lift, equidistribution
// statistics, near-tangency candidates and the order-k cascade scan, plus the
// formula discrepancy report.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bykov/maps.hpp"
#include "bykov/params.hpp"
#include "bykov/segment.hpp"

namespace bykov {

enum class ReversalKind { maximum, minimum };

struct ReversalEvent {
  int n{0};
  double s_n{0.0};    // 0 once underflowed; log_s stays exact
  double log_s{0.0};
  double phi_n{0.0};  // phase lift at the reversal
  double x_lift{0.0};
  ReversalKind kind{ReversalKind::maximum};
};

// All roots of the derived dx2/ds functional in phi over [0, pi): sign-change
// bracketing on `grid` cells plus bisection to 1e-12. Returns an empty list
// when no reversal exists.
inline std::vector<double> find_reversal_phases(const ModelParams& p,
                                                int grid = 10000) {
  std::vector<double> roots;
  double prev = reversal_functional(p, 0.0);
  for (int i = 1; i <= grid; ++i) {
    const double phi = kPi * static_cast<double>(i) / grid;
    const double cur = reversal_functional(p, phi);
    if (prev == 0.0) {
      roots.push_back(kPi * static_cast<double>(i - 1) / grid);
    } else if (prev * cur < 0.0) {
      double lo = kPi * static_cast<double>(i - 1) / grid, hi = phi;
      double flo = prev;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = reversal_functional(p, mid);
        if (flo * fm <= 0.0) hi = mid;
        else { lo = mid; flo = fm; }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  // verify each root against the finite-difference oracle on the composed map
  std::vector<double> verified;
  for (double phi0 : roots) {
    const double ls = -phi0 / p.g1;
    const double h = 1e-6;
    const double xm = segment_image_log(p, 0.0, ls + h).x2;
    const double xp = segment_image_log(p, 0.0, ls - h).x2;
    const double scale = std::max(1.0, std::abs(segment_image_log(p, 0.0, ls).x2));
    if (std::abs(xp - xm) / (2.0 * h) <= 1e-4 * scale) verified.push_back(phi0);
  }
  return verified;
}

namespace detail {

inline ReversalKind kind_at_phase(const ModelParams& p, double phi0) {
  // dx2/ds ~ -(1/s) * functional(phi); with s decreasing as phi grows, a
  // functional going negative->positive in phi means dx2/ds flips +->- in s,
  // i.e. a maximum of the lift.
  const double h = 1e-6;
  const double before = reversal_functional(p, phi0 - h);
  return before < 0.0 ? ReversalKind::maximum : ReversalKind::minimum;
}

}  // namespace detail

// Events s_n = s0 e^{-n pi / g1}, s0 = e^{-phi0/g1}, with the x lift taken
// from the segment image (composition path, log-parametrized so deep indices
// do not underflow). Truncates once s_n < 1e-300 unless `allow_underflow`.
inline std::vector<ReversalEvent> reversal_sequence(const ModelParams& p,
                                                    double phi0, int n_max,
                                                    bool allow_underflow = false) {
  std::vector<ReversalEvent> events;
  events.reserve(n_max + 1);
  const ReversalKind kind = detail::kind_at_phase(p, phi0);
  for (int n = 0; n <= n_max; ++n) {
    const double phi = phi0 + n * kPi;
    const double ls = -phi / p.g1;
    if (!allow_underflow && ls < std::log(1e-300)) break;
    const SegmentImage img = segment_image_log(p, 0.0, ls);
    ReversalEvent ev;
    ev.n = n;
    ev.log_s = ls;
    ev.s_n = std::exp(ls);
    ev.phi_n = phi;
    ev.x_lift = img.x2;
    ev.kind = kind;
    events.push_back(ev);
  }
  return events;
}

struct ProgressionFit {
  double slope_fit{0.0};
  double intercept{0.0};
  double max_abs_residual{0.0};
};

// Least-squares affine fit of x_lift against n.
inline ProgressionFit progression_check(const std::vector<ReversalEvent>& events) {
  ProgressionFit fit;
  const std::size_t N = events.size();
  if (N < 3) return fit;
  double sn = 0.0, sx = 0.0, snn = 0.0, snx = 0.0;
  for (const auto& e : events) {
    sn += e.n;
    sx += e.x_lift;
    snn += static_cast<double>(e.n) * e.n;
    snx += e.n * e.x_lift;
  }
  const double den = N * snn - sn * sn;
  fit.slope_fit = (N * snx - sn * sx) / den;
  fit.intercept = (sx - fit.slope_fit * sn) / N;
  for (const auto& e : events) {
    const double r = e.x_lift - (fit.intercept + fit.slope_fit * e.n);
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
  }
  return fit;
}

struct Equidistribution {
  double star_discrepancy{0.0};
  std::vector<int> histogram;
};

// Star discrepancy of the reduced reversal angles (exact O(N log N) formula
// for sorted points in [0,1)) plus a histogram over `bins`.
inline Equidistribution equidistribution(const std::vector<ReversalEvent>& events,
                                         int bins) {
  Equidistribution out;
  out.histogram.assign(bins, 0);
  std::vector<double> u;
  u.reserve(events.size());
  for (const auto& e : events) u.push_back(reduce_mod_2pi(e.x_lift) / kTwoPi);
  for (double v : u)
    ++out.histogram[std::min<int>(bins - 1, static_cast<int>(v * bins))];
  std::sort(u.begin(), u.end());
  const double N = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, (i + 1) / N - u[i]);
    d = std::max(d, u[i] - i / N);
  }
  out.star_discrepancy = d;
  return out;
}

struct TangencyCandidate {
  int order{1};
  ReversalEvent event;
  double stable_line_x{0.0};
  double circular_dist{0.0};
  WallPoint contact_point;   // on Out(sigma2), lifted x
  double arc_length{0.0};    // connection length inside the neighbourhood
};

// Arc length of the order-k connection inside the model neighbourhood:
// quadrature of the linearized flow arcs through V1 and V2 for each round.
inline double connection_arc_length(const ModelParams& p, double x0, double s,
                                    int k, int quad = 512) {
  auto arc_v1 = [&](const WallPoint& w) {
    // (rho, theta, z)(t) = (e^{-C1 t}, x + alpha1 t, y e^{E1 t}), t in [0, T]
    const double T = -std::log(w.y) / p.saddle.E1;
    double len = 0.0;
    for (int i = 0; i < quad; ++i) {
      const double t = T * (i + 0.5) / quad;
      const double rho = std::exp(-p.saddle.C1 * t);
      const double dr = -p.saddle.C1 * rho;
      const double dth = p.saddle.alpha1 * rho;
      const double dz = w.y * p.saddle.E1 * std::exp(p.saddle.E1 * t);
      len += std::sqrt(dr * dr + dth * dth + dz * dz) * T / quad;
    }
    return len;
  };
  auto arc_v2 = [&](const DiskPoint& d) {
    // (rho, theta, z)(t) = (r e^{E2 t}, phi - alpha2 t, e^{-C2 t})
    const double T = -std::log(d.r) / p.saddle.E2;
    double len = 0.0;
    for (int i = 0; i < quad; ++i) {
      const double t = T * (i + 0.5) / quad;
      const double rho = d.r * std::exp(p.saddle.E2 * t);
      const double dr = p.saddle.E2 * rho;
      const double dth = p.saddle.alpha2 * rho;
      const double dz = -p.saddle.C2 * std::exp(-p.saddle.C2 * t);
      len += std::sqrt(dr * dr + dth * dth + dz * dz) * T / quad;
    }
    return len;
  };

  double total = 0.0;
  WallPoint w{x0, s};
  for (int j = 1; j <= k; ++j) {
    const auto d1 = phi1(p, w);
    if (!d1.ok()) break;
    total += arc_v1(w);
    const auto d2 = psi12(p, d1.value);
    const auto e = phi2(p, d2.value);
    if (!e.ok()) break;  // exits sideways; the V2 arc is not traversed
    total += arc_v2(d2.value);
    w = psi21(p, e.value);
  }
  return total;
}

// Order-1 near-tangency candidates: indices n <= n_max whose reversal angle
// lies within tol_angle (mod 2pi) of the vertical stable line, sorted by
// distance. The reported offset stands in for the perturbation that would
// realize the tangency.
inline std::vector<TangencyCandidate> tangency_search(const ModelParams& p,
                                                      double stable_line_x,
                                                      double phi0, int n_max,
                                                      double tol_angle) {
  std::vector<TangencyCandidate> out;
  const auto events = reversal_sequence(p, phi0, n_max, /*allow_underflow=*/true);
  for (const auto& ev : events) {
    const double dist = circular_distance(ev.x_lift, stable_line_x);
    if (dist <= tol_angle) {
      TangencyCandidate c;
      c.order = 1;
      c.event = ev;
      c.stable_line_x = stable_line_x;
      c.circular_dist = dist;
      const SegmentImage img = segment_image_log(p, 0.0, ev.log_s);
      c.contact_point = {img.x2, img.y2};
      c.arc_length = ev.s_n > 0.0 ? connection_arc_length(p, 0.0, ev.s_n, 1) : 0.0;
      out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const TangencyCandidate& a, const TangencyCandidate& b) {
              return a.circular_dist < b.circular_dist;
            });
  return out;
}

// Order-k candidates: reversal points of the iterated traces located by sign
// change of the numerically differentiated lift (no closed form exists past
// the first pass).
inline std::vector<std::vector<TangencyCandidate>> cascade_scan(
    const ModelParams& p, int k_max, double stable_line_x, double tol_angle,
    double x0 = 0.0, const std::vector<double>* s_grid_in = nullptr) {
  std::vector<double> grid;
  if (s_grid_in) {
    grid = *s_grid_in;
  } else {
    const int n = 2000;
    const double llo = -6.0 * kPi, lhi = 0.0;
    for (int i = 0; i < n; ++i)
      grid.push_back(std::exp(llo + (lhi - llo) * i / (n - 1)));
  }

  std::vector<std::vector<TangencyCandidate>> per_order;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<TangencyCandidate> cands;
    const auto pieces = iterated_segment_trace(p, x0, grid, k);
    for (const auto& piece : pieces) {
      const auto& sm = piece.samples;
      for (std::size_t i = 2; i < sm.size(); ++i) {
        const double d0 = sm[i - 1].point.x - sm[i - 2].point.x;
        const double d1 = sm[i].point.x - sm[i - 1].point.x;
        if (d0 * d1 < 0.0) {
          // bisect on the difference quotient to locate the reversal in s
          double lo = sm[i - 2].s, hi = sm[i].s;
          auto slope = [&](double s) {
            const double h = std::max(1e-9 * s, 1e-300);
            const auto a = detail::iterate_segment_point(p, x0, s - h, k);
            const auto b = detail::iterate_segment_point(p, x0, s + h, k);
            if (!a.alive || !b.alive) return 0.0;
            return (b.out.x - a.out.x) / (2.0 * h);
          };
          double flo = slope(lo);
          for (int it = 0; it < 80 && std::abs(hi - lo) > 1e-12 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = slope(mid);
            if (flo * fm <= 0.0) hi = mid;
            else { lo = mid; flo = fm; }
          }
          const double s_rev = 0.5 * (lo + hi);
          const auto r = detail::iterate_segment_point(p, x0, s_rev, k);
          if (!r.alive) continue;
          const double dist = circular_distance(r.out.x, stable_line_x);
          if (dist <= tol_angle) {
            TangencyCandidate c;
            c.order = k;
            c.event.n = static_cast<int>(cands.size());
            c.event.s_n = s_rev;
            c.event.log_s = std::log(s_rev);
            c.event.x_lift = r.out.x;
            c.event.kind = d0 > 0.0 ? ReversalKind::maximum : ReversalKind::minimum;
            c.stable_line_x = stable_line_x;
            c.circular_dist = dist;
            c.contact_point = r.out;
            c.arc_length = connection_arc_length(p, x0, s_rev, k);
            cands.push_back(c);
          }
        }
      }
    }
    std::sort(cands.begin(), cands.end(),
              [](const TangencyCandidate& a, const TangencyCandidate& b) {
                return a.circular_dist < b.circular_dist;
              });
    per_order.push_back(std::move(cands));
  }
  return per_order;
}

// --- Formula discrepancy report --------------------------------------------

struct FormulaVerdict {
  std::string name;
  std::string verdict;  // matches | constant-factor-off | sign-off | mismatch
  double max_rel_deviation{0.0};
  double factor_estimate{1.0};
};

struct DiscrepancyReport {
  FormulaVerdict derived_vs_fd;       // analytic dx2/ds vs central differences
  FormulaVerdict printed_vs_derived;  // printed dx2/ds (2 g1 g2 cross term) vs derived
  FormulaVerdict trace_formula;       // printed Tr DR vs chain rule
  // reversal-condition cross check
  int printed_root_count_minus{0};    // roots of A_printed = -alpha1 E2/alpha2
  int printed_root_count_plus{0};     // roots of A_printed = +alpha1 E2/alpha2
  int oracle_root_count{0};
  double min_A_printed{0.0};
  double max_A_printed{0.0};
  std::string reversal_condition_verdict;
};

namespace detail {

inline FormulaVerdict classify_pair(const std::string& name,
                                    const std::vector<double>& ref,
                                    const std::vector<double>& alt) {
  FormulaVerdict v;
  v.name = name;
  double max_rel = 0.0, sum_ratio = 0.0, sum_ratio2 = 0.0;
  int nratio = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double scale = std::max(std::abs(ref[i]), 1e-12);
    max_rel = std::max(max_rel, std::abs(alt[i] - ref[i]) / scale);
    if (std::abs(ref[i]) > 1e-9) {
      const double r = alt[i] / ref[i];
      sum_ratio += r;
      sum_ratio2 += r * r;
      ++nratio;
    }
  }
  v.max_rel_deviation = max_rel;
  if (max_rel <= 1e-5) {
    v.verdict = "matches";
    return v;
  }
  if (nratio >= 3) {
    const double mean = sum_ratio / nratio;
    const double var = sum_ratio2 / nratio - mean * mean;
    v.factor_estimate = mean;
    if (var < 1e-6 * mean * mean + 1e-12) {
      v.verdict = std::abs(mean + 1.0) < 1e-3 ? "sign-off" : "constant-factor-off";
      return v;
    }
  }
  v.verdict = "mismatch";
  return v;
}

inline int count_roots(const std::function<double(double)>& f, int grid = 10000) {
  int count = 0;
  double prev = f(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double cur = f(kPi * static_cast<double>(i) / grid);
    if (prev * cur < 0.0) ++count;
    prev = cur;
  }
  return count;
}

}  // namespace detail

inline DiscrepancyReport formula_discrepancy_report(
    const ModelParams& p, const std::vector<double>& s_grid) {
  DiscrepancyReport rep;
  std::vector<double> fd, derived, printed, tr_chain, tr_printed;
  const double a2 = p.global.a * p.global.a;

  for (double s : s_grid) {
    const SegmentImage img = segment_image(p, 0.0, s);
    derived.push_back(img.dx2ds);
    const double h = 1e-7 * s;
    fd.push_back((segment_image(p, 0.0, s + h).x2 -
                  segment_image(p, 0.0, s - h).x2) / (2.0 * h));
    // printed derivative carries 2 g1 g2 on the cross term
    const double C = shear_radius_factor(p, img.phi);
    const double sc = std::sin(img.phi) * std::cos(img.phi);
    printed.push_back(-(1.0 / s) *
                      (0.5 * p.g2 + (1.0 / C) * (2.0 * p.g1 * p.g2 * (a2 - 1.0 / a2) * sc +
                                                 p.g1)));
  }
  rep.derived_vs_fd = detail::classify_pair("derived-dxds-vs-finite-differences",
                                            derived, fd);
  rep.printed_vs_derived =
      detail::classify_pair("printed-dxds-vs-derived", derived, printed);

  // printed trace expression vs chain rule, over valid return-map points
  for (double s : s_grid) {
    const WallPoint w{0.0, s};
    const auto J = jac_return_map(p, w);
    if (!J.ok()) continue;
    tr_chain.push_back(J.value.trace());
    const double phi = -p.g1 * std::log(s);
    const auto g = geometry_functions(p, phi);
    const double sc = std::sin(phi) * std::cos(phi);
    const double rhs = p.saddle.alpha1 * p.saddle.E2 / p.saddle.alpha2;
    tr_printed.push_back(2.0 * s * (a2 - 1.0 / a2) * sc +
                         (1.0 / s) * (p.saddle.alpha2 /
                                      (p.saddle.E1 * p.saddle.E2 * g.C)) *
                             (g.A_printed - rhs));
  }
  rep.trace_formula =
      detail::classify_pair("printed-trace-vs-chain-rule", tr_chain, tr_printed);

  // reversal condition: roots of A_printed = -/+ alpha1 E2/alpha2 vs oracle
  const double rhs = p.saddle.alpha1 * p.saddle.E2 / p.saddle.alpha2;
  auto Ap = [&](double phi) { return geometry_functions(p, phi).A_printed; };
  rep.printed_root_count_minus =
      detail::count_roots([&](double phi) { return Ap(phi) + rhs; });
  rep.printed_root_count_plus =
      detail::count_roots([&](double phi) { return Ap(phi) - rhs; });
  rep.oracle_root_count = static_cast<int>(find_reversal_phases(p).size());
  rep.min_A_printed = Ap(0.0);
  rep.max_A_printed = Ap(0.0);
  for (int i = 1; i <= 10000; ++i) {
    const double v = Ap(kPi * static_cast<double>(i) / 10000);
    rep.min_A_printed = std::min(rep.min_A_printed, v);
    rep.max_A_printed = std::max(rep.max_A_printed, v);
  }
  if (rep.printed_root_count_minus == rep.oracle_root_count)
    rep.reversal_condition_verdict = "matches";
  else if (rep.printed_root_count_plus == rep.oracle_root_count)
    rep.reversal_condition_verdict = "sign-off";
  else
    rep.reversal_condition_verdict = "mismatch";
  return rep;
}

}  // namespace bykov
