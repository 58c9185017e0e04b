#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bykov/fields.hpp"
#include "bykov/ode.hpp"
#include "bykov/params.hpp"
#include "bykov/rng.hpp"

using namespace bykov;

namespace {

FieldSpec circular_field() {
  FieldSpec f;
  f.name = "circular";
  f.evaluate = [](const Vec3& v) -> Vec3 { return {-v[1], v[0], 0.0}; };
  return f;
}

SaddleParams fig_saddle() {
  return validate_params(1.0, 1.0, 2.0, 1.0, 1.0, 2.0, 2.0).saddle;
}

}  // namespace

TEST_CASE("circular orbit closes after one period") {
  const auto traj = integrate(circular_field(), {1.0, 0.0, 0.0}, kTwoPi);
  REQUIRE(traj.termination == Termination::reached_t_end);
  const Vec3 end = traj.states.back();
  CHECK(norm(end - Vec3{1.0, 0.0, 0.0}) <= 1e-8);
  for (std::size_t i = 1; i < traj.times.size(); ++i)
    CHECK(traj.times[i] > traj.times[i - 1]);
}

TEST_CASE("integrator accuracy scales like a fifth-order method") {
  // endpoint error against accepted-step count over a tolerance ladder
  std::vector<double> errs, steps;
  for (double tol : {1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12}) {
    IntegrateOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol * 1e-2;
    const auto traj = integrate(circular_field(), {1.0, 0.0, 0.0}, kTwoPi, opt);
    const double err = norm(traj.states.back() - Vec3{1.0, 0.0, 0.0});
    if (err > 0.0) {
      errs.push_back(std::log(err));
      steps.push_back(std::log(static_cast<double>(traj.times.size() - 1)));
    }
  }
  REQUIRE(errs.size() >= 4);
  // least-squares slope of log err vs log N: expect about -5
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(errs.size());
  for (std::size_t i = 0; i < errs.size(); ++i) {
    sx += steps[i];
    sy += errs[i];
    sxx += steps[i] * steps[i];
    sxy += steps[i] * errs[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(-slope >= 4.5);
}

TEST_CASE("forward-backward integration closes on the Michelson flow") {
  const auto f = michelson(1.0);
  const Vec3 x0{0.0, 0.1, 0.0};
  const auto fwd = integrate(f, x0, 5.0);
  REQUIRE(fwd.termination == Termination::reached_t_end);
  const auto back = integrate(f, fwd.states.back(), -5.0);
  REQUIRE(back.termination == Termination::reached_t_end);
  CHECK(norm(back.states.back() - x0) <= 1e-6);
}

TEST_CASE("immediate radius escape") {
  IntegrateOptions opt;
  opt.max_radius = 0.5;
  const auto traj = integrate(circular_field(), {1.0, 0.0, 0.0}, 1.0, opt);
  CHECK(traj.termination == Termination::escaped_radius);
  CHECK(traj.times.size() == 1);
}

TEST_CASE("Michelson reversibility") {
  // with S(x,y,z) = (-x, y, -z), S o phi_t o S = phi_{-t}
  const auto f = michelson(0.9);
  const Vec3 x0{0.3, -0.2, 0.5};
  const Vec3 sx0{-x0[0], x0[1], -x0[2]};
  const auto fwd = integrate(f, x0, 3.0);
  const auto bwd = integrate(f, sx0, -3.0);
  REQUIRE(fwd.termination == Termination::reached_t_end);
  REQUIRE(bwd.termination == Termination::reached_t_end);
  const Vec3 end = fwd.states.back();
  const Vec3 sbwd{-bwd.states.back()[0], bwd.states.back()[1],
                  -bwd.states.back()[2]};
  CHECK(norm(end - sbwd) <= 1e-6);
}

TEST_CASE("divergence-free fields") {
  const SampleBox box{{-2, -2, -2}, {2, 2, 2}};
  CHECK(divergence_max(michelson(1.0), box, 1000) <= 1e-9);
  CHECK(divergence_max(michelson(kMichelsonCK), box, 1000) <= 1e-9);
  const auto s = fig_saddle();
  CHECK(divergence_max(linear_saddle_field(s, WhichSaddle::sigma1), box, 1000) <=
        1e-9);
  CHECK(divergence_max(linear_saddle_field(s, WhichSaddle::sigma2), box, 1000) <=
        1e-9);

  FieldSpec expanding;
  expanding.name = "expanding";
  expanding.evaluate = [](const Vec3& v) -> Vec3 { return {v[0], 0.0, 0.0}; };
  CHECK(divergence_max(expanding, box, 100) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("linear saddle fields evaluate the cylindrical flows") {
  const auto s = fig_saddle();
  const auto f1 = linear_saddle_field(s, WhichSaddle::sigma1);
  const Vec3 v1 = f1.evaluate({1.0, 0.0, 0.0});
  CHECK(v1[0] == Catch::Approx(-s.C1));
  CHECK(v1[1] == Catch::Approx(s.alpha1));
  CHECK(v1[2] == Catch::Approx(0.0).margin(1e-15));

  const auto f2 = linear_saddle_field(s, WhichSaddle::sigma2);
  const Vec3 v2 = f2.evaluate({0.0, 0.0, 1.0});
  CHECK(v2[0] == Catch::Approx(0.0).margin(1e-15));
  CHECK(v2[1] == Catch::Approx(0.0).margin(1e-15));
  CHECK(v2[2] == Catch::Approx(-s.C2));
}

TEST_CASE("flow through the sigma1 neighbourhood realizes the local map") {
  const auto params = validate_params(1.0, 1.0, 2.0, 1.0, 1.0, 2.0, 2.0);
  const auto f = linear_saddle_field(params.saddle, WhichSaddle::sigma1);
  SplitMix64 rng(55);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-kPi, kPi);
    const double y = rng.log_uniform(1e-4, 0.9);
    // wall point (rho, theta, z) = (1, x, y); flow until z = 1
    IntegrateOptions opt;
    opt.event = [](const Vec3& v) { return v[2] - 1.0; };
    opt.abs_tol = 1e-13;
    const auto traj = integrate(f, {std::cos(x), std::sin(x), y}, 1e3, opt);
    const Vec3 exit = traj.states.back();
    const double rho = std::hypot(exit[0], exit[1]);
    const double theta = std::atan2(exit[1], exit[0]);
    CHECK(rho == Catch::Approx(std::sqrt(y)).margin(1e-8));
    CHECK(circular_distance(theta, x - params.g1 * std::log(y)) <= 1e-8);
  }
}

TEST_CASE("flow through the sigma2 neighbourhood realizes the exit map") {
  const auto params = validate_params(1.0, 1.0, 2.0, 1.0, 1.0, 2.0, 2.0);
  const auto f = linear_saddle_field(params.saddle, WhichSaddle::sigma2);
  SplitMix64 rng(56);
  for (int i = 0; i < 100; ++i) {
    const double r = rng.log_uniform(1e-2, 0.9);
    const double phi = rng.uniform(-kPi, kPi);
    // disk point (rho, theta, z) = (r, phi, 1); flow until rho = 1
    IntegrateOptions opt;
    opt.event = [](const Vec3& v) { return std::hypot(v[0], v[1]) - 1.0; };
    opt.abs_tol = 1e-13;
    const auto traj =
        integrate(f, {r * std::cos(phi), r * std::sin(phi), 1.0}, 1e3, opt);
    const Vec3 exit = traj.states.back();
    const double theta = std::atan2(exit[1], exit[0]);
    CHECK(circular_distance(theta, phi - params.g2 * std::log(r)) <= 1e-8);
    CHECK(exit[2] == Catch::Approx(r * r).margin(1e-8));
  }
}

TEST_CASE("Michelson constant and equilibria") {
  CHECK(kMichelsonCK == Catch::Approx(15.0 * std::sqrt(22.0 / 6859.0)).margin(1e-15));
  CHECK(kMichelsonCK == Catch::Approx(0.849517242393111).margin(1e-12));

  const auto reports = equilibria_with_spectrum(
      michelson(1.0), {{1.4, 0.0, 0.0}, {-1.4, 0.0, 0.0}});
  REQUIRE(reports.size() == 2);
  const double s2 = std::sqrt(2.0);
  for (const auto& rep : reports) {
    CHECK(std::abs(std::abs(rep.location[0]) - s2) <= 1e-10);
    CHECK(std::abs(rep.location[1]) <= 1e-10);
    CHECK(std::abs(rep.location[2]) <= 1e-10);
    // char poly lambda^3 + lambda + x
    for (const auto& ev : rep.eigenvalues) {
      const auto res = ev * ev * ev + ev + std::complex<double>(rep.location[0]);
      CHECK(std::abs(res) <= 1e-9);
    }
    // divergence-free: eigenvalue sum ~ 0
    std::complex<double> sum = 0.0;
    for (const auto& ev : rep.eigenvalues) sum += ev;
    CHECK(std::abs(sum) <= 1e-7);
  }
}

TEST_CASE("Michelson spectrum at the distinguished parameter") {
  const double c = kMichelsonCK;
  const auto reports = equilibria_with_spectrum(
      michelson(c), {{std::sqrt(2.0) * c, 0.0, 0.0}});
  REQUIRE(reports.size() == 1);
  const auto& rep = reports.front();
  CHECK(rep.morse_index == 2);
  REQUIRE(rep.saddle_params_estimate.has_value());
  const auto sp = *rep.saddle_params_estimate;
  CHECK(sp.E2 == Catch::Approx(0.3804429547).margin(1e-6));
  CHECK(sp.C2 == Catch::Approx(0.7608859095).margin(1e-6));
  CHECK(sp.alpha2 == Catch::Approx(1.1975853391).margin(1e-6));
  // zero trace forces the 2:1 resonance between contraction and expansion
  CHECK(std::abs(sp.C2 - 2.0 * sp.E2) <= 1e-9);
}

TEST_CASE("time delay basics") {
  const auto f = michelson(1.0);
  // already outside the sphere
  const auto out = time_delay(f, {5.0, 0.0, 0.0}, 4.0, 100.0);
  CHECK(out.T_plus == 0.0);
  CHECK(out.T_minus == 0.0);

  const auto td = time_delay(f, {0.0, 0.1, 0.0}, 4.0, 1000.0);
  CHECK(!td.bounded_plus);
  CHECK(td.T_plus == Catch::Approx(3.4296959634).margin(1e-5));
  CHECK(td.r0 == Catch::Approx(0.1));

  // norm-preserving rotation never escapes
  FieldSpec rot;
  rot.name = "rotation";
  rot.evaluate = [](const Vec3& v) -> Vec3 { return {-v[1], v[0], 0.0}; };
  const auto bounded = time_delay(rot, {1.0, 0.0, 0.0}, 4.0, 50.0);
  CHECK(bounded.bounded_plus);
  CHECK(bounded.bounded_minus);
}

TEST_CASE("constant drift gives a spike-free monotone profile") {
  FieldSpec drift;
  drift.name = "drift";
  drift.evaluate = [](const Vec3&) -> Vec3 { return {1.0, 0.0, 0.0}; };
  const auto prof = time_delay_scan(drift, {-0.9, 0.0, 0.0}, {0.9, 0.0, 0.0},
                                    21, 2.0, 100.0);
  CHECK(prof.spikes_plus.empty());
  CHECK(prof.spikes_minus.empty());
  for (std::size_t i = 1; i < prof.samples.size(); ++i)
    CHECK(prof.samples[i].T_plus < prof.samples[i - 1].T_plus);
}

TEST_CASE("time-delay singularities near the Michelson equilibria") {
  const auto f = michelson(kMichelsonCK);
  const auto prof = time_delay_scan(f, {1.0, 0.0, 0.0}, {1.4, 0.0, 0.0}, 41,
                                    4.0, 1000.0, 1.5);
  REQUIRE(prof.spikes_plus.size() == 1);
  CHECK(prof.spikes_plus[0] == 20);
}

TEST_CASE("doubling the scan resolution keeps spikes in place") {
  const auto f = michelson(kMichelsonCK);
  const auto coarse = time_delay_scan(f, {1.0, 0.0, 0.0}, {1.4, 0.0, 0.0}, 41,
                                      4.0, 1000.0, 1.3);
  const auto fine = time_delay_scan(f, {1.0, 0.0, 0.0}, {1.4, 0.0, 0.0}, 81,
                                    4.0, 1000.0, 1.3);
  REQUIRE(!coarse.spikes_plus.empty());
  REQUIRE(!fine.spikes_plus.empty());
  // every refined spike sits within one coarse cell of a coarse spike
  for (int fi : fine.spikes_plus) {
    bool near = false;
    for (int ci : coarse.spikes_plus)
      if (std::abs(fi - 2 * ci) <= 2) near = true;
    CHECK(near);
  }
}
