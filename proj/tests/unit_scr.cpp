#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "resrisk/scr.hpp"
#include "test_support.hpp"

using namespace resrisk;
using testsupport::hand_triangle;

TEST_CASE("method names") {
  CHECK(method_from_name("without") == Method::without);
  CHECK(method_from_name("bootstrap") == Method::bootstrap);
  CHECK(method_from_name("inversion") == Method::inversion_adj);
  CHECK(std::string(method_name(Method::inversion_adj)) == "inversion");
  CHECK_THROWS_AS(method_from_name("plugin"), std::invalid_argument);
  CHECK(method_index(Method::without) == 0);
  CHECK(method_index(Method::inversion_adj) == 2);
}

TEST_CASE("quantile rank and empirical quantile") {
  CHECK(quantile_rank(100, 0.95) == 95);
  CHECK(quantile_rank(2000, 0.995) == 1990);
  CHECK(quantile_rank(10, 0.05) == 1);
  CHECK(quantile_rank(7, 0.99) == 7);
  CHECK(quantile_rank(5, 0.6) == 3);
  CHECK(quantile_rank(5, 0.995) == 5);

  CHECK(empirical_quantile({5.0, 1.0, 3.0, 2.0, 4.0}, 0.6) == 3.0);
  CHECK(empirical_quantile({5.0, 1.0, 3.0, 2.0, 4.0}, 0.995) == 5.0);
  CHECK(empirical_quantile({5.0, 1.0, 3.0, 2.0, 4.0}, 0.1) == 1.0);
  CHECK_THROWS_AS(empirical_quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("adjusted residue pool is exact on the hand triangle") {
  const Triangle tri = hand_triangle();
  // Two residues in column 1; the shrinkage adjustment makes them exactly
  // -1 and +1 under both weightings.
  for (Gamma gamma : {Gamma::g0, Gamma::g1}) {
    const auto est = estimate(tri, gamma);
    const auto pool = build_residue_pool(tri, est);
    REQUIRE(pool.size() == 2);
    CHECK(pool[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(pool[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("residue pool requires variation") {
  // All ratios equal in every estimable column: no usable residues.
  const Triangle flat =
      Triangle::from_rows({{100.0, 150.0, 165.0}, {110.0, 165.0}, {120.0}});
  const auto est = estimate(flat, Gamma::g0);
  CHECK(est.sigma2hat[1] == 0.0);
  CHECK_THROWS_AS(build_residue_pool(flat, est), EstimationError);

  const ScrEngine engine(flat, Gamma::g0);
  CHECK(engine.residue_pool().empty());
  RngStream rng(1, 0, 16);
  ScrWorkspace ws;
  CHECK_THROWS_AS(engine.scenario_bootstrap(rng, ws), EstimationError);
  CHECK_THROWS_AS(engine.scenario_inversion_adj(rng, ws), EstimationError);
  CHECK_NOTHROW(engine.scenario_without(rng, ws));
}

TEST_CASE("engine precomputation matches the free functions") {
  const Triangle tri = hand_triangle();
  const ScrEngine engine(tri, Gamma::g0);
  const auto est = estimate(tri, Gamma::g0);
  CHECK(engine.horizon() == 2);
  CHECK(engine.estimates().fhat[1] == est.fhat[1]);
  CHECK(engine.estimates().sigma2hat[1] == est.sigma2hat[1]);
  CHECK(engine.reserve0() == doctest::Approx(96.75).epsilon(1e-13));
  CHECK(engine.residue_pool() == build_residue_pool(tri, est));
  // Single stochastic column carries all of the weight.
  CHECK(engine.column_weights()[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("inversion draw invariants") {
  const Triangle tri = load_triangle("data/triangle_gl.csv");
  for (Gamma gamma : {Gamma::g0, Gamma::g1}) {
    const ScrEngine engine(tri, gamma);
    const auto& est = engine.estimates();
    const int n = engine.horizon();
    RngStream rng(5, 0, 16);
    for (int rep = 0; rep < 20; ++rep) {
      const auto d = engine.draw_inversion(rng);
      CHECK(d.ahat > 0.0);
      CHECK(d.ahat <= 1.0 + 1e-12);
      for (int k = 1; k <= n - 1; ++k) {
        CHECK(d.sigma2sim[k] * d.mprime[k] ==
              doctest::Approx(est.sigma2hat[k]).epsilon(1e-12));
        CHECK(d.fsim[k] ==
              doctest::Approx(est.fhat[k] -
                              std::sqrt(d.sigma2sim[k]) * d.rprime[k])
                  .epsilon(1e-12));
        CHECK(d.mprime[k] > 0.0);
      }
    }
  }
}

TEST_CASE("inversion identity draw for degenerate columns") {
  // Column 2 has identical ratios (exactly 1.5 in floating point), so
  // sigma2hat_2 = 0; its draw must be the identity while column 1 stays
  // stochastic.
  const Triangle tri = Triangle::from_rows({{100.0, 150.0, 225.0, 252.0},
                                            {110.0, 176.0, 264.0},
                                            {120.0, 168.0},
                                            {130.0}});
  const auto est = estimate(tri, Gamma::g0);
  REQUIRE(est.sigma2hat[2] == 0.0);
  REQUIRE(est.sigma2hat[1] > 0.0);

  const ScrEngine engine(tri, Gamma::g0);
  RngStream rng(9, 1, 16);
  const auto d = engine.draw_inversion(rng);
  CHECK(d.rprime[2] == 0.0);
  CHECK(d.mprime[2] == 1.0);
  CHECK(d.fsim[2] == est.fhat[2]);
  CHECK(d.sigma2sim[2] == 0.0);
  CHECK(d.sigma2sim[1] > 0.0);

  ScrWorkspace ws;
  CHECK_NOTHROW(engine.scenario_inversion_adj(rng, ws));
  CHECK_NOTHROW(engine.scenario_bootstrap(rng, ws));
}

TEST_CASE("inversion pivot moments" * doctest::timeout(120)) {
  const Triangle tri = load_triangle("data/triangle_gl.csv");
  const ScrEngine engine(tri, Gamma::g0);
  const long draws = 100000;

  // Column 1 has 8 unit-weight ratios: R' ~ N(0, 1/8), 7 M' ~ chi^2(7).
  double sum_r = 0.0, sum_r2 = 0.0, sum_m = 0.0, sum_m2 = 0.0;
  for (long j = 0; j < draws; ++j) {
    RngStream rng(77, static_cast<std::uint64_t>(j), 16);
    const auto d = engine.draw_inversion(rng);
    sum_r += d.rprime[1];
    sum_r2 += d.rprime[1] * d.rprime[1];
    sum_m += d.mprime[1];
    sum_m2 += d.mprime[1] * d.mprime[1];
  }
  const double mean_r = sum_r / draws;
  const double var_r = sum_r2 / draws - mean_r * mean_r;
  const double mean_m = sum_m / draws;
  const double var_m = sum_m2 / draws - mean_m * mean_m;

  CHECK(mean_r == doctest::Approx(0.0).scale(1.0).epsilon(0.0035));
  CHECK(var_r == doctest::Approx(1.0 / 8.0).epsilon(0.02));
  CHECK(mean_m == doctest::Approx(1.0).epsilon(0.006));
  CHECK(var_m == doctest::Approx(2.0 / 7.0).epsilon(0.02));
}

TEST_CASE("scenario losses scale with the triangle") {
  const Triangle tri = hand_triangle();
  const Triangle big = Triangle::from_rows(
      {{100000.0, 150000.0, 165000.0}, {120000.0, 192000.0}, {110000.0}});
  for (Gamma gamma : {Gamma::g0, Gamma::g1}) {
    const ScrEngine small_engine(tri, gamma);
    const ScrEngine big_engine(big, gamma);
    ScrWorkspace ws1, ws2;
    for (Method m :
         {Method::without, Method::bootstrap, Method::inversion_adj}) {
      for (long j = 0; j < 50; ++j) {
        RngStream r1(3, static_cast<std::uint64_t>(j), 16 + method_index(m));
        RngStream r2(3, static_cast<std::uint64_t>(j), 16 + method_index(m));
        const double a = small_engine.scenario(m, r1, ws1);
        const double b = big_engine.scenario(m, r2, ws2);
        CHECK(b == doctest::Approx(1000.0 * a).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("bootstrap with an explicit pool") {
  const Triangle tri = hand_triangle();
  const ScrEngine engine(tri, Gamma::g0);
  ScrWorkspace ws;
  RngStream rng(4, 0, 17);
  const std::vector<double> pool = {-1.0, 1.0};
  CHECK_NOTHROW(engine.scenario_bootstrap(pool, rng, ws));
  const std::vector<double> tiny = {0.5};
  CHECK_THROWS_AS(engine.scenario_bootstrap(tiny, rng, ws),
                  EstimationError);
}

TEST_CASE("compute_scr determinism and argument checks") {
  const Triangle tri = hand_triangle();

  const auto a = compute_scr(tri, Method::bootstrap, Gamma::g0, 0.99, 4000,
                             123, 1);
  const auto b = compute_scr(tri, Method::bootstrap, Gamma::g0, 0.99, 4000,
                             123, 3);
  CHECK(a.scr == b.scr);
  CHECK(a.reserve0 == doctest::Approx(96.75).epsilon(1e-13));
  CHECK(a.scenarios == 4000);
  CHECK(a.seed == 123);

  const auto lo = compute_scr(tri, Method::without, Gamma::g0, 0.9, 4000,
                              123, 2);
  const auto hi = compute_scr(tri, Method::without, Gamma::g0, 0.995, 4000,
                              123, 2);
  CHECK(lo.scr <= hi.scr);

  CHECK_THROWS_AS(compute_scr(tri, Method::without, Gamma::g0, 1.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(compute_scr(tri, Method::without, Gamma::g0, 0.5, 0, 1),
                  std::invalid_argument);
}
