#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bykov/reversal.hpp"
#include "bykov/rng.hpp"
#include "bykov/spectra.hpp"

using namespace bykov;

namespace {

ModelParams fig_params(double a = 2.0) {
  return validate_params(1.0, 1.0, 2.0, 1.0, 1.0, 2.0, a);
}

}  // namespace

TEST_CASE("synthetic Jacobian classification") {
  const Jacobian2 rot{0.0, -1.0, 1.0, 0.0};  // trace 0, det 1
  const auto ce = classify_jacobian(rot);
  CHECK(ce.cls == StabilityClass::elliptic);
  CHECK(ce.det == Catch::Approx(1.0));
  CHECK(std::abs(ce.eigenvalues[0].imag()) == Catch::Approx(1.0));
  CHECK(std::abs(ce.eigenvalues[0].real()) < 1e-12);

  const Jacobian2 hyp{2.0, 1.0, 1.0, 1.0};  // trace 3, det 1
  const auto ch = classify_jacobian(hyp);
  CHECK(ch.cls == StabilityClass::hyperbolic);
  const double s5 = std::sqrt(5.0);
  CHECK(ch.eigenvalues[0].real() == Catch::Approx((3.0 + s5) / 2.0));
  CHECK(ch.eigenvalues[1].real() == Catch::Approx((3.0 - s5) / 2.0));

  const Jacobian2 par{1.0, 1.0, 0.0, 1.0};  // trace exactly 2
  CHECK(classify_jacobian(par).cls == StabilityClass::parabolic_within_tol);
}

TEST_CASE("elliptic classification implies unit-modulus conjugate pair") {
  SplitMix64 rng(19);
  for (int i = 0; i < 200; ++i) {
    const double tr = rng.uniform(-1.99, 1.99);
    // det-1 area-preserving Jacobian with the prescribed trace
    const Jacobian2 J{tr / 2.0, -1.0, 1.0 - tr * tr / 4.0, tr / 2.0};
    const auto c = classify_jacobian(J);
    REQUIRE(c.cls == StabilityClass::elliptic);
    CHECK(std::abs(std::abs(c.eigenvalues[0]) - 1.0) <= 1e-9);
    CHECK(std::abs(std::abs(c.eigenvalues[1]) - 1.0) <= 1e-9);
    CHECK(c.eigenvalues[0].real() == Catch::Approx(c.eigenvalues[1].real()));
    CHECK(c.eigenvalues[0].imag() == Catch::Approx(-c.eigenvalues[1].imag()));
  }
}

TEST_CASE("fixed points near the origin of the return chart") {
  const auto p = fig_params();
  const SearchBox box{-kPi, kPi, 1e-6, 1e-2};
  const auto search = find_fixed_points(p, box, 10, 1e-10);
  REQUIRE(!search.points.empty());
  CHECK(search.seeds_total == 100);
  for (const auto& fp : search.points) {
    CHECK(fp.residual <= 1e-10);
    CHECK(std::abs(fp.classification.det - 1.0) <= 1e-9);
    // class consistent with the trace thresholds
    const double at = std::abs(fp.classification.trace);
    if (fp.classification.cls == StabilityClass::elliptic) CHECK(at < 2.0);
    if (fp.classification.cls == StabilityClass::hyperbolic) CHECK(at > 2.0);
    // the report's point is genuinely fixed under R
    const auto img = return_map(p, fp.point);
    REQUIRE(img.ok());
    CHECK(circular_distance(img.value.x, fp.point.x) +
              std::abs(img.value.y - fp.point.y) <=
          1e-9);
  }
}

TEST_CASE("search box inside the escape region finds nothing") {
  const auto p = fig_params();
  // centered on phi ~ 0 at height ~0.9 where y C(phi) > 1 for every seed
  const double xc = 0.5 * std::log(0.9);
  const SearchBox box{xc - 0.05, xc + 0.05, 0.89, 0.91};
  const auto search = find_fixed_points(p, box, 6, 1e-10);
  CHECK(search.points.empty());
  CHECK(search.seeds_dropped == search.seeds_total);
}

TEST_CASE("classification agrees with a finite-difference oracle") {
  const auto p = fig_params();
  SplitMix64 rng(37);
  int checked = 0;
  while (checked < 100) {
    const WallPoint w{rng.uniform(-kPi, kPi), rng.log_uniform(1e-5, 0.3)};
    const auto c = classify(p, w);
    if (!c.ok()) continue;
    const double h = 1e-7, hy = 1e-7 * w.y;
    const auto fx1 = return_map(p, {w.x + h, w.y});
    const auto fx0 = return_map(p, {w.x - h, w.y});
    const auto fy1 = return_map(p, {w.x, w.y + hy});
    const auto fy0 = return_map(p, {w.x, w.y - hy});
    if (!fx1.ok() || !fx0.ok() || !fy1.ok() || !fy0.ok()) continue;
    ++checked;
    const double tr_fd = (fx1.value.x - fx0.value.x) / (2 * h) +
                         (fy1.value.y - fy0.value.y) / (2 * hy);
    const double tol = 1e-4 * std::max(1.0, std::abs(tr_fd));
    // no class flip outside the parabolic tolerance band
    if (std::abs(std::abs(tr_fd) - 2.0) > 1e-3) {
      const auto cls_fd = classify_trace(tr_fd);
      CHECK(c.value.cls == cls_fd);
    }
    CHECK(c.value.trace == Catch::Approx(tr_fd).margin(tol));
  }
}

TEST_CASE("elliptic strip hugs the reversal fiber") {
  const auto p = fig_params();
  const auto phases = find_reversal_phases(p);
  REQUIRE(!phases.empty());
  const auto intervals = elliptic_strip(p, phases[0], 1e-2);
  REQUIRE(!intervals.empty());
  CHECK(intervals.front().y_lo <= 1e-6);

  // off-reversal fiber: the 1/y trace term dominates at small heights
  const auto off = elliptic_strip(p, 0.3, 1e-2);
  for (const auto& iv : off) CHECK(iv.y_lo > 1e-6);

  // degenerate scan range is harmless
  CHECK_NOTHROW(elliptic_strip(p, phases[0], 5e-14));
}

TEST_CASE("strip geometry follows the contraction ratio") {
  const auto p = fig_params();
  const auto s0 = StripSpec::make(p, 0, 1e-4, -1.2e-4, -4e-5);
  const auto s1 = StripSpec::make(p, 1, 1e-4, -1.2e-4, -4e-5);
  const double ratio = std::exp(-kTwoPi / p.g1);
  CHECK(s0.y_lo == Catch::Approx(s0.y_hi * ratio).epsilon(1e-12));
  CHECK(s1.y_hi == Catch::Approx(s0.y_hi * ratio).epsilon(1e-12));
  CHECK(s1.y_lo < s1.y_hi);
}

TEST_CASE("horseshoe check records a deterministic verdict with expansion") {
  const auto p = fig_params();
  const auto strip = StripSpec::make(p, 0, 1e-4, -1.2e-4, -4e-5);
  const auto ev1 = horseshoe_crossing(p, strip, 400);
  const auto ev2 = horseshoe_crossing(p, strip, 400);
  CHECK(ev1.crossing == ev2.crossing);
  CHECK(ev1.expansion_estimate == ev2.expansion_estimate);
  REQUIRE(ev1.evidence.size() == ev2.evidence.size());
  for (std::size_t i = 0; i < ev1.evidence.size(); ++i) {
    CHECK(ev1.evidence[i].out.x == ev2.evidence[i].out.x);
    CHECK(ev1.evidence[i].out.y == ev2.evidence[i].out.y);
  }
  // strong stretching at small heights
  CHECK(ev1.expansion_estimate > 10.0);
  CHECK(std::string(ev1.method) == "heuristic-boundary-sampling");
}

TEST_CASE("strip in the escape region reports escape") {
  const auto p = fig_params();
  StripSpec strip;
  strip.x_min = 0.5 * std::log(0.9) - 0.05;
  strip.x_max = 0.5 * std::log(0.9) + 0.05;
  strip.y_hi = 0.91;
  strip.y_lo = 0.89;
  const auto ev = horseshoe_crossing(p, strip, 200);
  CHECK(!ev.crossing);
  CHECK(ev.reason == "escape");
}
