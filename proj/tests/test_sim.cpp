#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "mihpo/errors.hpp"
#include "mihpo/sim.hpp"

using namespace mihpo;

TEST_SUITE("sim") {

TEST_CASE("make_oval geometry") {
  const TrackPath track = make_oval(400.0, 200.0, 2.0);
  const double expected_length = 2.0 * 400.0 + 2.0 * M_PI * 200.0;
  CHECK(track.total_length() == doctest::Approx(expected_length).epsilon(1e-12));
  CHECK(std::hypot(track.x.front() - track.x.back(), track.y.front() - track.y.back()) < 1e-6);

  double max_kappa = 0.0;
  for (double k : track.kappa) {
    CHECK((k == 0.0 || k == doctest::Approx(0.005).epsilon(1e-12)));
    max_kappa = std::max(max_kappa, k);
  }
  CHECK(max_kappa == doctest::Approx(0.005).epsilon(1e-12));

  SUBCASE("kappa is consistent with the heading derivative") {
    for (size_t i = 1; i + 1 < track.s.size(); ++i) {
      double dpsi = track.heading[i + 1] - track.heading[i];
      while (dpsi > M_PI) dpsi -= 2.0 * M_PI;
      while (dpsi < -M_PI) dpsi += 2.0 * M_PI;
      const double ds = track.s[i + 1] - track.s[i];
      const double kappa_fd = dpsi / ds;
      // straight/corner junction samples land between the two exact values
      CHECK(kappa_fd >= -1e-9);
      CHECK(kappa_fd <= 0.005 + 1e-9);
    }
  }

  SUBCASE("nearest_index locates points") {
    const size_t idx = track.nearest_index(100.0, 1.5, SIZE_MAX);
    CHECK(std::abs(track.x[idx] - 100.0) < 2.0);
    CHECK(std::abs(track.y[idx]) < 2.0);
    const size_t again = track.nearest_index(104.0, -0.5, idx);
    CHECK(std::abs(track.x[again] - 104.0) < 2.0);
  }
}

TEST_CASE("track CSV round trip") {
  const TrackPath track = make_oval(50.0, 30.0, 1.0);
  const auto path = (std::filesystem::temp_directory_path() / "mihpo_track.csv").string();
  save_track_csv(track, path);
  const TrackPath back = load_track_csv(path);
  REQUIRE(back.s.size() == track.s.size());
  CHECK(back.x == track.x);
  CHECK(back.kappa == track.kappa);
  std::filesystem::remove(path);
}

TEST_CASE("bicycle step") {
  const VehicleParams vp = fixtures::vehicle();
  const BicycleGeometry geo = fixtures::geometry();
  const AxleTires tires = fixtures::symmetric_tires();

  SUBCASE("straight-line equilibrium holds exactly") {
    VehicleState st;
    st.v_x = 30.0;
    const double drag = vp.C_d * 30.0 * 30.0 + vp.C_r;
    VehicleState next = st;
    for (int i = 0; i < 100; ++i) next = step(next, 0.0, drag, 0.01, tires, vp, geo);
    CHECK(next.v_x == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(next.v_y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(next.psi_dot == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(next.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(next.x == doctest::Approx(30.0).epsilon(1e-9));
  }

  SUBCASE("integrator shows fifth-order one-step error") {
    VehicleState st;
    st.v_x = 20.0;
    st.v_y = 0.4;
    st.psi_dot = 0.25;
    const double delta = 0.04;
    const double fx = 800.0;

    auto integrate = [&](double h, int substeps) {
      VehicleState s = st;
      for (int i = 0; i < substeps; ++i) s = step(s, delta, fx, h / substeps, tires, vp, geo);
      return s;
    };
    auto error_vs_reference = [&](double h) {
      const VehicleState coarse = integrate(h, 1);
      const VehicleState fine = integrate(h, 64);
      return std::abs(coarse.v_y - fine.v_y) + std::abs(coarse.psi_dot - fine.psi_dot);
    };
    const double e1 = error_vs_reference(0.02);
    const double e2 = error_vs_reference(0.01);
    // local truncation is O(h^5): halving h shrinks the error ~32x
    CHECK(e1 / e2 > 20.0);
    CHECK(e1 / e2 < 45.0);
  }

  SUBCASE("steady-state cornering satisfies a_y = v_x * psi_dot") {
    VehicleState st;
    st.v_x = 25.0;
    const double delta = 0.03;
    for (int i = 0; i < 4000; ++i) {
      // balance drag so speed holds roughly constant
      const double drag = vp.C_d * st.v_x * st.v_x + vp.C_r;
      st = step(st, delta, drag, 0.01, tires, vp, geo);
    }
    const VehicleState before = st;
    st = step(st, delta, vp.C_d * st.v_x * st.v_x + vp.C_r, 0.01, tires, vp, geo);
    const double v_y_dot = (st.v_y - before.v_y) / 0.01;
    const double a_y = st.v_x * st.psi_dot + v_y_dot;
    CHECK(st.psi_dot > 0.0);  // left steer turns left
    CHECK(std::abs(v_y_dot) < 0.02 * std::abs(a_y));
    CHECK(a_y == doctest::Approx(st.v_x * st.psi_dot).epsilon(0.02));
  }

  SUBCASE("coasting decelerates strictly") {
    VehicleState st;
    st.v_x = 40.0;
    for (int i = 0; i < 200; ++i) {
      const VehicleState next = step(st, 0.0, 0.0, 0.01, tires, vp, geo);
      CHECK(next.v_x < st.v_x);
      st = next;
    }
  }

  SUBCASE("dt outside (0, 0.02] is rejected") {
    VehicleState st;
    st.v_x = 10.0;
    CHECK_THROWS_AS(step(st, 0.0, 0.0, 0.0, tires, vp, geo), std::invalid_argument);
    CHECK_THROWS_AS(step(st, 0.0, 0.0, 0.05, tires, vp, geo), std::invalid_argument);
  }
}

TEST_CASE("run_lap") {
  const TrackPath track = make_oval(150.0, 80.0, 2.0);
  const PlannerParams planner = fixtures::planner(0.7);
  const LqrGainTable gains = fixtures::gain_table();
  const EngineTorqueMap map = fixtures::engine_map();
  const AxleTires tires = fixtures::axle_tires();
  const VehicleParams vp = fixtures::vehicle();
  const BicycleGeometry geo = fixtures::geometry();

  SimOptions options;
  options.v_initial = 12.0;

  SUBCASE("zero laps is an empty success") {
    SimOptions none = options;
    none.n_laps = 0;
    const LapResult result = run_lap(track, planner, gains, map, tires, vp, geo, none);
    CHECK(result.completed);
    CHECK(result.trace.rows.empty());
  }

  SUBCASE("one lap completes inside the corridor") {
    const LapResult result = run_lap(track, planner, gains, map, tires, vp, geo, options);
    CHECK(result.completed);
    CHECK(result.failure.empty());
    CHECK(!result.trace.rows.empty());
    CHECK(result.max_abs_e_y < 2.0);
    CHECK(result.min_corner_speed > 5.0);
  }

  SUBCASE("doubling the lap count doubles the trace duration") {
    const LapResult one = run_lap(track, planner, gains, map, tires, vp, geo, options);
    SimOptions two_opts = options;
    two_opts.n_laps = 2;
    const LapResult two = run_lap(track, planner, gains, map, tires, vp, geo, two_opts);
    REQUIRE(one.completed);
    REQUIRE(two.completed);
    const double ratio =
        static_cast<double>(two.trace.rows.size()) / static_cast<double>(one.trace.rows.size());
    // the first lap carries the launch transient, so the ratio is just under 2
    CHECK(ratio > 1.7);
    CHECK(ratio < 2.1);
  }

  SUBCASE("trace CSV has the fixed header and full rows") {
    const LapResult result = run_lap(track, planner, gains, map, tires, vp, geo, options);
    const auto path = (std::filesystem::temp_directory_path() / "mihpo_trace.csv").string();
    save_trace_csv(result.trace, path);
    std::ifstream file(path);
    std::string header;
    std::getline(file, header);
    CHECK(header ==
          "t,x,y,psi,v_x,v_y,psi_dot,delta,throttle,brake,v_des,a_y,a_y_max,e_y,e_psi,kappa_ref");
    std::string row;
    size_t rows = 0;
    while (std::getline(file, row)) ++rows;
    CHECK(rows == result.trace.rows.size());
    std::filesystem::remove(path);
  }
}

}  // TEST_SUITE
