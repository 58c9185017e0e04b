#include <catch2/catch_amalgamated.hpp>

#include "bykov/regions.hpp"

using namespace bykov;

namespace {

ModelParams fig_params(double a = 2.0) {
  return validate_params(1.0, 1.0, 2.0, 1.0, 1.0, 2.0, a);
}

}  // namespace

TEST_CASE("eigenvalue region bounds for the reference set") {
  const auto r = in_region_B(fig_params());
  CHECK(r.lower == Catch::Approx(-6.067627457812105).margin(1e-12));
  CHECK(r.middle == Catch::Approx(-3.0).margin(1e-12));
  CHECK(r.upper == Catch::Approx(2.3176274578121054).margin(1e-12));
  CHECK(r.inside);
}

TEST_CASE("middle term leaving the interval breaks membership") {
  // E2 = 10 (C2 = 20) pushes m = 6 above the upper bound
  const auto p = validate_params(1.0, 1.0, 2.0, 1.0, 10.0, 20.0, 2.0);
  const auto r = in_region_B(p);
  CHECK(r.middle == Catch::Approx(6.0).margin(1e-12));
  CHECK(r.upper == Catch::Approx(2.3176274578121054).margin(1e-12));
  CHECK(!r.inside);
}

TEST_CASE("a=1 collapses the interval: membership impossible") {
  SplitMix64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const double alpha1 = rng.log_uniform(0.1, 10.0);
    const double C1 = rng.log_uniform(0.1, 10.0);
    const double alpha2 = rng.log_uniform(0.1, 10.0);
    const double E2 = rng.log_uniform(0.1, 10.0);
    const auto p = validate_params(alpha1, C1, 2 * C1, alpha2, E2, 2 * E2, 1.0);
    const auto r = in_region_B(p);
    CHECK(r.lower == 0.0);
    CHECK(r.upper == 0.0);
    CHECK(!r.inside);
  }
}

TEST_CASE("rational gamma is recognized") {
  const auto r1 = gamma_rationality(fig_params(), 1000, 1e-12);
  CHECK(r1.rational_found);
  CHECK(r1.p == 1);
  CHECK(r1.q == 1);
  CHECK(std::string(r1.verdict()) == "rational");

  const auto p32 = validate_params(1.0, 1.0, 2.0, 3.0, 2.0, 4.0, 2.0);
  const auto r2 = gamma_rationality(p32, 1000, 1e-12);
  CHECK(r2.rational_found);
  CHECK(r2.p == 3);
  CHECK(r2.q == 2);
}

TEST_CASE("irrational gamma below the denominator bound") {
  const double s2 = std::sqrt(2.0);
  const auto p = validate_params(1.0, 1.0, 2.0, 1.0, s2, 2.0 * s2, 2.0);
  // gamma = 1/sqrt(2): best approximation with q <= 1e5 misses by ~1.6e-10
  const auto r = gamma_rationality(p, 100000, 1e-12);
  CHECK(!r.rational_found);
  CHECK(std::string(r.verdict()) == "no-rational-below-bound");
  CHECK(r.error > 1e-12);
  CHECK(r.error < 1e-8);
  // the test is bounded: raising the denominator cap admits the convergent
  // 470832/665857, whose error ~8e-13 slips under the same tolerance
  const auto r2 = gamma_rationality(p, 1000000, 1e-12);
  CHECK(r2.rational_found);
  CHECK(r2.q == 665857);
  CHECK(r2.p == 470832);
}

TEST_CASE("continued fraction of a quadratic irrational is periodic") {
  const double s2 = std::sqrt(2.0);
  const auto p = validate_params(1.0, 1.0, 2.0, 1.0, s2, 2.0 * s2, 2.0);
  const auto r = gamma_rationality(p, 100000, 1e-12);
  // 1/sqrt(2) = [0; 1, 2, 2, 2, ...]
  REQUIRE(r.continued_fraction.size() >= 5);
  CHECK(r.continued_fraction[0] == 0);
  CHECK(r.continued_fraction[1] == 1);
  CHECK(r.continued_fraction[2] == 2);
  CHECK(r.continued_fraction[3] == 2);
  CHECK(r.continued_fraction[4] == 2);
}

TEST_CASE("oracle detects reversals for the reference set") {
  CHECK(oracle_reversal_exists(fig_params()));
}

TEST_CASE("consistency report is deterministic and well-formed") {
  const auto rep1 = region_consistency_report(40, 424242);
  const auto rep2 = region_consistency_report(40, 424242);
  REQUIRE(rep1.rows.size() == 40);
  CHECK(rep1.agreement_rate >= 0.0);
  CHECK(rep1.agreement_rate <= 1.0);
  for (std::size_t i = 0; i < rep1.rows.size(); ++i) {
    CHECK(rep1.rows[i].alpha1 == rep2.rows[i].alpha1);
    CHECK(rep1.rows[i].in_B == rep2.rows[i].in_B);
    CHECK(rep1.rows[i].oracle_reversal == rep2.rows[i].oracle_reversal);
    CHECK(rep1.rows[i].a >= 1.0);
    CHECK(rep1.rows[i].a <= 4.0);
  }
  // different seed draws different parameters
  const auto rep3 = region_consistency_report(40, 7);
  CHECK(rep3.rows[0].alpha1 != rep1.rows[0].alpha1);
}
