#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bykov/maps.hpp"
#include "bykov/rng.hpp"
#include "bykov/segment.hpp"

using namespace bykov;

namespace {

ModelParams fig_params(double a = 2.0) {
  return validate_params(1.0, 1.0, 2.0, 1.0, 1.0, 2.0, a);
}

Jacobian2 numeric_jacobian(const ModelParams& p, const WallPoint& w,
                           bool full_return) {
  const double hx = 1e-7, hy = 1e-7 * w.y;
  auto eval = [&](const WallPoint& q) {
    return full_return ? return_map(p, q).value : eta(p, q).value;
  };
  const WallPoint fx1 = eval({w.x + hx, w.y}), fx0 = eval({w.x - hx, w.y});
  const WallPoint fy1 = eval({w.x, w.y + hy}), fy0 = eval({w.x, w.y - hy});
  return {(fx1.x - fx0.x) / (2 * hx), (fy1.x - fy0.x) / (2 * hy),
          (fx1.y - fx0.y) / (2 * hx), (fy1.y - fy0.y) / (2 * hy)};
}

}  // namespace

TEST_CASE("shear radius factor range and period") {
  const auto p = fig_params();
  const double a2 = 4.0;
  SplitMix64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const double phi = rng.uniform(-10.0, 10.0);
    const double C = shear_radius_factor(p, phi);
    CHECK(C >= 1.0 / a2 - 1e-12);
    CHECK(C <= a2 + 1e-12);
    CHECK(shear_radius_factor(p, phi + kPi) == Catch::Approx(C).margin(1e-12));
  }
  CHECK(shear_radius_factor(p, 0.0) == Catch::Approx(4.0));
  CHECK(shear_radius_factor(p, kPi / 2.0) == Catch::Approx(0.25));
}

TEST_CASE("shear angle lift laws") {
  const auto p = fig_params();
  CHECK(shear_angle_lift(p, 0.0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(shear_angle_lift(p, kPi) == Catch::Approx(kPi).margin(1e-12));
  SplitMix64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const double phi = rng.uniform(-12.0, 12.0);
    // half-period translation law
    CHECK(shear_angle_lift(p, phi + kPi) ==
          Catch::Approx(shear_angle_lift(p, phi) + kPi).margin(1e-11));
    // derivative identity lift' = 1/C
    const double h = 1e-6;
    const double fd =
        (shear_angle_lift(p, phi + h) - shear_angle_lift(p, phi - h)) / (2 * h);
    CHECK(fd == Catch::Approx(shear_angle_lift_deriv(p, phi)).margin(1e-7));
    // monotone
    CHECK(shear_angle_lift(p, phi + 1e-4) > shear_angle_lift(p, phi));
  }
}

TEST_CASE("psi12 agrees with the Cartesian shear") {
  const auto p = fig_params();
  SplitMix64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const DiskPoint d{rng.uniform(0.01, 1.0), rng.uniform(-8.0, 8.0)};
    const auto out = psi12(p, d);
    REQUIRE(out.ok());
    const double u = d.r * std::cos(d.phi), v = d.r * std::sin(d.phi);
    CHECK(out.value.r * std::cos(out.value.phi) ==
          Catch::Approx(p.global.a * u).margin(1e-12));
    CHECK(out.value.r * std::sin(out.value.phi) ==
          Catch::Approx(v / p.global.a).margin(1e-12));
  }
}

TEST_CASE("local map formulas and escapes") {
  const auto p = fig_params();
  const auto d = phi1(p, {0.3, 0.25});
  REQUIRE(d.ok());
  CHECK(d.value.r == Catch::Approx(0.5));
  CHECK(d.value.phi == Catch::Approx(0.3 - 0.5 * std::log(0.25)));
  CHECK(phi1(p, {0.0, 1.5}).status == MapStatus::escape_phi1);
  CHECK(phi1(p, {0.0, 0.0}).status == MapStatus::escape_phi1);

  const auto w = phi2(p, {0.5, 0.7});
  REQUIRE(w.ok());
  CHECK(w.value.y == Catch::Approx(0.25));
  CHECK(w.value.x == Catch::Approx(0.7 + std::log(0.5)));
  CHECK(phi2(p, {1.2, 0.0}).status == MapStatus::escape_phi2);
}

TEST_CASE("psi21 is a rotation on the principal chart") {
  auto p0 = fig_params();
  p0.global.rotation = 0.0;
  const WallPoint w{0.4, 0.2};
  const auto id = psi21(p0, w);
  CHECK(id.x == Catch::Approx(0.4));
  CHECK(id.y == Catch::Approx(0.2));

  const auto p = fig_params();
  const auto r = psi21(p, {0.4 + kTwoPi, 0.2});  // lift reduced first
  CHECK(r.x == Catch::Approx(-0.2));
  CHECK(r.y == Catch::Approx(0.4));
}

TEST_CASE("eta at the reference point") {
  const auto p = fig_params();
  const double y0 = std::exp(-4.0 * kPi);
  const auto out = eta(p, {0.0, y0});
  REQUIRE(out.ok());
  // phi = 2pi, C = 4: closed-form image (ln 2, 4 e^{-4 pi}) with lift 2pi
  CHECK(out.value.y == Catch::Approx(4.0 * y0).epsilon(1e-12));
  CHECK(out.value.x == Catch::Approx(std::log(2.0)).margin(1e-10));
  // a height whose image leaves the section escapes through phi2
  CHECK(eta(p, {0.0, 0.9}).status == MapStatus::escape_phi2);
}

TEST_CASE("unit determinant of the half-return and full return") {
  SplitMix64 rng(101);
  for (int set = 0; set < 10; ++set) {
    const double alpha1 = rng.log_uniform(0.2, 5.0);
    const double C1 = rng.log_uniform(0.2, 5.0);
    const double alpha2 = rng.log_uniform(0.2, 5.0);
    const double E2 = rng.log_uniform(0.2, 5.0);
    const double a = rng.uniform(1.0, 3.0);
    const auto p = validate_params(alpha1, C1, 2 * C1, alpha2, E2, 2 * E2, a);
    int checked = 0;
    for (int i = 0; i < 4000 && checked < 1000; ++i) {
      const WallPoint w{rng.uniform(-kPi, kPi), rng.log_uniform(1e-6, 0.5)};
      const auto Je = jac_eta(p, w);
      if (!Je.ok()) continue;
      ++checked;
      CHECK(std::abs(Je.value.det() - 1.0) <= 1e-9);
      const auto Jr = jac_return_map(p, w);
      REQUIRE(Jr.ok());
      CHECK(std::abs(Jr.value.det() - 1.0) <= 1e-9);
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("analytic Jacobian matches finite differences") {
  const auto p = fig_params();
  SplitMix64 rng(23);
  int checked = 0;
  while (checked < 20) {
    const WallPoint w{rng.uniform(-kPi, kPi), rng.log_uniform(1e-4, 0.2)};
    const auto J = jac_eta(p, w);
    if (!J.ok()) continue;
    // keep clear of the domain boundary so central differences stay inside
    if (!eta(p, {w.x, w.y * 1.01}).ok() || !eta(p, {w.x, w.y * 0.99}).ok())
      continue;
    ++checked;
    const auto N = numeric_jacobian(p, w, false);
    CHECK(J.value.a11 == Catch::Approx(N.a11).margin(1e-5 * (1 + std::abs(N.a11))));
    CHECK(J.value.a12 == Catch::Approx(N.a12).epsilon(1e-4));
    CHECK(J.value.a21 == Catch::Approx(N.a21).margin(1e-5 * (1 + std::abs(N.a21))));
    CHECK(J.value.a22 == Catch::Approx(N.a22).epsilon(1e-4));
  }
}

TEST_CASE("near-boundary points report near_singular") {
  const auto p = fig_params();
  CHECK(jac_eta(p, {0.0, 1e-12}).status == MapStatus::near_singular);
  CHECK(jac_eta(p, {0.0, 2.0}).status == MapStatus::escape_phi1);
}

TEST_CASE("closed form matches the composition on the segment") {
  for (double a : {1.0, 1.3, 2.0, 2.7, 4.0}) {
    const auto p = fig_params(a);
    std::vector<double> grid;
    for (int i = 0; i < 200; ++i)
      grid.push_back(std::exp(-4.0 * kPi + 4.0 * kPi * i / 199.0) * 0.99);
    CHECK_NOTHROW(segment_trace(p, 0.3, grid));
  }
}

TEST_CASE("degenerate shear a=1 gives constant angular image") {
  // g2 = -2 g1 for this set, so the two log terms cancel exactly
  const auto p = fig_params(1.0);
  std::vector<double> xs;
  for (int i = 0; i < 500; ++i) {
    const double ls = -6.0 * kPi * i / 499.0 - 0.01;
    xs.push_back(segment_image_log(p, 0.7, ls).x2);
  }
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= xs.size();
  CHECK(var < 1e-20);
  CHECK(mean == Catch::Approx(0.7).margin(1e-12));
}

TEST_CASE("analytic segment derivative matches finite differences") {
  const auto p = fig_params();
  SplitMix64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const double s = rng.log_uniform(1e-5, 0.5);
    const double h = 1e-6 * s;
    const double fd = (segment_image(p, 0.0, s + h).x2 -
                       segment_image(p, 0.0, s - h).x2) / (2 * h);
    CHECK(segment_image(p, 0.0, s).dx2ds ==
          Catch::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("phi1 image of a segment spirals inward") {
  const auto p = fig_params();
  const double s_min = std::exp(-6.0 * kPi);
  const auto t = phi1_image_of_segment(p, 0.0, s_min, 1.0, 2000);
  const auto d = spiral_diagnostics(t);
  // winding = (g1 / 2pi) * ln(s_max/s_min) = 1.5 turns (sign from orientation)
  CHECK(std::abs(d.winding) == Catch::Approx(1.5).margin(1e-9));
  CHECK(d.monotone_fraction == Catch::Approx(1.0));
  CHECK(d.radius_limit == Catch::Approx(std::exp(-3.0 * kPi)).epsilon(1e-9));
}

TEST_CASE("iterated segment traces survive two rounds for the reference set") {
  const auto p = fig_params();
  std::vector<double> grid;
  for (int i = 0; i < 800; ++i)
    grid.push_back(std::exp(-6.0 * kPi + 6.0 * kPi * i / 799.0) * 0.99);
  const auto pieces = iterated_segment_trace(p, 0.0, grid, 2);
  CHECK(!pieces.empty());
  for (const auto& piece : pieces)
    for (const auto& s : piece.samples) CHECK(s.valid);
}

TEST_CASE("extinct grids raise") {
  const auto p = fig_params();
  // x0 chosen so phi is near 0 where C = 4 pushes every image off the section
  const double x0 = 0.5 * std::log(0.9);
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(0.89 + 0.01 * i / 49.0);
  CHECK_THROWS_AS(iterated_segment_trace(p, x0, grid, 1), ExtinctError);
}
