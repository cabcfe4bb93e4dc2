#include <doctest.h>

#include <cmath>

#include "mihpo/errors.hpp"
#include "mihpo/planning.hpp"
#include "mihpo/rng.hpp"

using namespace mihpo;

TEST_SUITE("planning") {

TEST_CASE("lateral load transfer") {
  VehicleParams vp;
  vp.m_s = 700.0;
  vp.h_a = 0.3;
  vp.track_width = 1.6;

  CHECK(lateral_load_transfer(0.0, vp) == 0.0);
  CHECK(lateral_load_transfer(9.0, vp) == doctest::Approx(1181.25).epsilon(1e-15));
  // linear in the lateral acceleration
  CHECK(lateral_load_transfer(18.0, vp) == doctest::Approx(2.0 * 1181.25).epsilon(1e-15));
  CHECK(lateral_load_transfer(-9.0, vp) == doctest::Approx(-1181.25).epsilon(1e-15));
}

TEST_CASE("tire peak force") {
  SUBCASE("saturating curve peaks at D") {
    // C*atan(B*alpha_max) passes pi/2, so the sine reaches 1 inside the range
    const TireParams p{10.0, 1.6, 5000.0, 0.0, 0.0};
    const double peak = tire_peak_force(p, {-3.0, 3.0});
    CHECK(peak == doctest::Approx(5000.0).epsilon(0.01));
  }
  SUBCASE("homogeneous in D with no vertical shift") {
    TireParams p{9.5, 1.4, 5200.0, 0.01, 0.0};
    const double peak1 = tire_peak_force(p, {-0.3, 0.3});
    p.D *= 2.0;
    const double peak2 = tire_peak_force(p, {-0.3, 0.3});
    CHECK(peak2 == doctest::Approx(2.0 * peak1).epsilon(1e-9));
  }
  SUBCASE("matches a dense brute-force scan within 0.1%") {
    const TireParams fitted{9.5, 1.4, 5200.0, 0.008, -150.0};
    const auto range = std::make_pair(-0.25, 0.25);
    double brute = 0.0;
    const int n = 1000001;
    for (int i = 0; i < n; ++i) {
      const double alpha = range.first + (range.second - range.first) * i / (n - 1);
      brute = std::max(brute, std::abs(tire_lateral_force(alpha, fitted)));
    }
    const double peak = tire_peak_force(fitted, range);
    CHECK(peak == doctest::Approx(brute).epsilon(1e-3));
    CHECK(peak >= brute - 1e-9);  // refinement can only improve on the grid
  }
  SUBCASE("empty range throws") {
    CHECK_THROWS_AS(tire_peak_force(TireParams{}, {0.2, 0.2}), std::invalid_argument);
  }
}

TEST_CASE("max lateral acceleration") {
  CHECK(max_lateral_accel(4000.0, 5000.0, 0.0, 0.0, 0.0, 750.0) ==
        doctest::Approx(9000.0 / 750.0).epsilon(1e-15));
  // pure coupling term
  CHECK(max_lateral_accel(0.0, 0.0, 0.0, 50.0, 0.1, 750.0) == doctest::Approx(-5.0).epsilon(1e-15));
  // full expression
  const double expected = (5000.0 + 4000.0 * std::cos(0.05) - 750.0 * 40.0 * 0.2) / 750.0;
  CHECK(max_lateral_accel(4000.0, 5000.0, 0.05, 40.0, 0.2, 750.0) ==
        doctest::Approx(expected).epsilon(1e-15));
  CHECK_THROWS_AS(max_lateral_accel(1.0, 1.0, 0.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("velocity planning") {
  CHECK(plan_velocity(0.01, 4.0, 100.0) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(plan_velocity(0.0, 4.0, 62.0) == 62.0);
  CHECK(plan_velocity(-0.01, 4.0, 100.0) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(plan_velocity(0.01, 4.0, 15.0) == 15.0);  // cap binds
  // quadrupling a_y doubles the speed below the cap
  CHECK(plan_velocity(0.01, 16.0, 100.0) == doctest::Approx(40.0).epsilon(1e-12));
  CHECK_THROWS_AS(plan_velocity(0.01, -1.0, 100.0), NumericError);

  SUBCASE("monotone in both arguments") {
    RngStream rng(17);
    for (int i = 0; i < 200; ++i) {
      const double kappa = rng.uniform(1e-4, 0.05);
      const double a = rng.uniform(0.1, 20.0);
      const double bump = rng.uniform(0.01, 5.0);
      CHECK(plan_velocity(kappa, a + bump, 1e6) >= plan_velocity(kappa, a, 1e6));
      CHECK(plan_velocity(kappa * (1.0 + bump), a, 1e6) <= plan_velocity(kappa, a, 1e6));
    }
  }
}

TEST_CASE("usable force scales linearly in mu and load ratio") {
  const double peak = 5200.0;
  CHECK(max_tire_force(0.7, 2000.0, 2000.0, peak) == doctest::Approx(0.7 * peak));
  CHECK(max_tire_force(0.7, 2400.0, 2000.0, peak) ==
        doctest::Approx(0.7 * 1.2 * peak).epsilon(1e-15));
  CHECK(max_tire_force(0.9, 2000.0, 2000.0, peak) / max_tire_force(0.3, 2000.0, 2000.0, peak) ==
        doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("cornering stiffness") {
  const TireParams p{10.0, 1.5, 5000.0, 0.0, 0.0};
  CHECK(cornering_stiffness(p) == 75000.0);

  const TireParams q{9.5, 1.4, 5200.0, 0.008, -150.0};
  const double h = 1e-7;
  const double fd = (tire_lateral_force(-q.S_x + h, q) - tire_lateral_force(-q.S_x - h, q)) / (2.0 * h);
  CHECK(cornering_stiffness(q) == doctest::Approx(fd).epsilon(1e-6));
  CHECK(cornering_stiffness(q) == tire_force_slope(-q.S_x, q));
}

}  // TEST_SUITE
