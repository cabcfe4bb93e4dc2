#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mihpo/dataset.hpp"
#include "mihpo/errors.hpp"
#include "mihpo/models.hpp"
#include "mihpo/rng.hpp"

using namespace mihpo;

TEST_SUITE("models") {

TEST_CASE("tire curve hand cases") {
  SUBCASE("origin with no shifts") {
    CHECK(tire_lateral_force(0.0, TireParams{8.0, 1.3, 4000.0, 0.0, 0.0}) == 0.0);
  }
  SUBCASE("shift cancellation returns the vertical offset") {
    const TireParams p{8.0, 1.3, 4000.0, 0.013, -212.0};
    CHECK(tire_lateral_force(-p.S_x, p) == doctest::Approx(-212.0).epsilon(1e-15));
  }
  SUBCASE("scalar arithmetic check") {
    const TireParams p{10.0, 1.5, 5000.0, 0.01, -200.0};
    const double expected = 5000.0 * std::sin(1.5 * std::atan(10.0 * 0.06)) - 200.0;
    CHECK(tire_lateral_force(0.05, p) == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("tire curve properties") {
  RngStream rng(314);
  for (int trial = 0; trial < 50; ++trial) {
    TireParams p;
    p.B = rng.uniform(2.0, 20.0);
    p.C = rng.uniform(0.8, 2.5);
    p.D = rng.uniform(1000.0, 9000.0);
    p.S_x = 0.0;
    p.S_y = 0.0;
    const double alpha = rng.uniform(-0.5, 0.5);
    CAPTURE(trial);

    // odd in alpha with no shifts
    CHECK(tire_lateral_force(-alpha, p) ==
          doctest::Approx(-tire_lateral_force(alpha, p)).epsilon(1e-12));
    // |F| bounded by the peak factor
    CHECK(std::abs(tire_lateral_force(alpha, p)) <= p.D);
  }
}

TEST_CASE("tire slope at the shifted origin equals B*C*D") {
  const TireParams p{9.5, 1.4, 5200.0, 0.008, -150.0};
  CHECK(tire_force_slope(-p.S_x, p) == p.B * p.C * p.D);

  // central finite differences agree to 1e-6 relative
  const double h = 1e-7;
  const double fd =
      (tire_lateral_force(-p.S_x + h, p) - tire_lateral_force(-p.S_x - h, p)) / (2.0 * h);
  CHECK(fd == doctest::Approx(p.B * p.C * p.D).epsilon(1e-6));
}

TEST_CASE("engine torque polynomial") {
  const EngineCurveParams p{10.0, 20.0, -5.0, 1.0, 15.0};
  CHECK(engine_torque(0.0, p) == 10.0);
  CHECK(engine_torque(1.0, p) == doctest::Approx(26.0).epsilon(1e-15));
  CHECK(engine_torque(0.5, p) == doctest::Approx(18.875).epsilon(1e-15));
  CHECK_THROWS_AS(engine_torque(-0.01, p), std::invalid_argument);
  CHECK_THROWS_AS(engine_torque(1.01, p), std::invalid_argument);
}

TEST_CASE("brake placeholder saturates") {
  CHECK(brake_force_to_pedal(0.0, 80.0) == 0.0);
  CHECK(brake_force_to_pedal(80.0 * 50.0, 80.0) == 50.0);
  CHECK(brake_force_to_pedal(1e9, 80.0) == 100.0);
  CHECK_THROWS_AS(brake_force_to_pedal(-1.0, 80.0), std::invalid_argument);
}

TEST_CASE("derive_engine_samples") {
  VehicleParams vp;
  vp.m = 750.0;
  vp.C_d = 1.2;
  vp.C_r = 100.0;
  vp.R_w = 0.3;
  vp.eta_t = 0.95;
  vp.i_0 = 3.0;
  vp.gear_ratios = {2.0};
  vp.w_e_max = 7000.0;

  SUBCASE("statics: only rolling resistance remains") {
    const std::vector<DriveLogSample> log = {{0.0, 0.0, 3000.0, 1, 15.0}};
    const auto datasets = derive_engine_samples(log, vp, {15.0});
    REQUIRE(datasets.count(15.0) == 1);
    const double expected = 100.0 * 0.3 / (0.95 * 2.0 * 3.0);
    CHECK(datasets.at(15.0).outputs[0] == doctest::Approx(expected).epsilon(1e-15));
    CHECK(datasets.at(15.0).inputs(0, 0) == doctest::Approx(3000.0 / 7000.0).epsilon(1e-15));
  }

  SUBCASE("scalar arithmetic check") {
    const std::vector<DriveLogSample> log = {{20.0, 2.0, 4000.0, 1, 20.0}};
    const auto datasets = derive_engine_samples(log, vp, {20.0});
    // F = 750*2 + 1.2*400 + 100 = 2080 N, T = 2080*0.3/(0.95*6)
    CHECK(datasets.at(20.0).outputs[0] == doctest::Approx(2080.0 * 0.3 / 5.7).epsilon(1e-12));
  }

  SUBCASE("round trip through the forward dynamics is exact") {
    RngStream rng(55);
    std::vector<DriveLogSample> log;
    std::vector<double> torques;
    for (int i = 0; i < 40; ++i) {
      const double torque = rng.uniform(20.0, 300.0);
      const double v_x = rng.uniform(5.0, 60.0);
      const double i_g = vp.gear_ratios[0];
      // forward: a_x from the longitudinal balance at this torque
      const double traction = torque * vp.eta_t * i_g * vp.i_0 / vp.R_w;
      const double a_x = (traction - vp.C_d * v_x * v_x - vp.C_r) / vp.m;
      log.push_back({v_x, a_x, rng.uniform(1000.0, 6500.0), 1, 5.0});
      torques.push_back(torque);
    }
    const auto datasets = derive_engine_samples(log, vp, {5.0});
    REQUIRE(datasets.at(5.0).size() == 40);
    for (int i = 0; i < 40; ++i) {
      CHECK(datasets.at(5.0).outputs[i] ==
            doctest::Approx(torques[static_cast<size_t>(i)]).epsilon(1e-12));
    }
  }

  SUBCASE("binning keeps only samples near a label") {
    const std::vector<DriveLogSample> log = {
        {10.0, 1.0, 3000.0, 1, 14.5},  // -> 15
        {10.0, 1.0, 3000.0, 1, 19.0},  // -> 20 (within 2)
        {10.0, 1.0, 3000.0, 1, 11.0},  // 4 away from 15 -> dropped
    };
    std::int64_t dropped = 0;
    const auto datasets = derive_engine_samples(log, vp, {5.0, 15.0, 20.0}, 2.0, &dropped);
    CHECK(dropped == 1);
    CHECK(datasets.at(15.0).size() == 1);
    CHECK(datasets.at(20.0).size() == 1);
    CHECK(datasets.count(5.0) == 0);
  }

  SUBCASE("unknown gear throws") {
    const std::vector<DriveLogSample> log = {{10.0, 1.0, 3000.0, 7, 15.0}};
    CHECK_THROWS_AS(derive_engine_samples(log, vp, {15.0}), InputError);
  }

  SUBCASE("drive log CSV feeds the derivation") {
    const auto path = (std::filesystem::temp_directory_path() / "mihpo_drive_log.csv").string();
    {
      std::ofstream f(path);
      f << "v_x,a_x,engine_rpm,gear,throttle_pct\n"
        << "20.0,2.0,4000,1,20.0\n"
        << "15.0,nan,3500,1,20.0\n"
        << "18.0,1.5,3800,1,15.2\n";
    }
    std::int64_t rejected = 0;
    const auto log = load_drive_log(path, &rejected);
    CHECK(rejected == 1);
    REQUIRE(log.size() == 2);
    CHECK(log[0].v_x == 20.0);
    CHECK(log[0].gear == 1);
    const auto datasets = derive_engine_samples(log, vp, {15.0, 20.0});
    CHECK(datasets.at(20.0).size() == 1);
    CHECK(datasets.at(15.0).size() == 1);
    CHECK(datasets.at(20.0).outputs[0] == doctest::Approx(2080.0 * 0.3 / 5.7).epsilon(1e-12));
    std::filesystem::remove(path);
  }
}

TEST_CASE("polynomial least squares recovers exact cubics") {
  RngStream rng(77);
  Eigen::VectorXd coeffs(4);
  coeffs << 25.0, 180.0, -120.0, 35.0;
  Dataset d;
  d.inputs.resize(60, 1);
  d.outputs.resize(60);
  for (Eigen::Index i = 0; i < 60; ++i) {
    const double w = rng.uniform(0.0, 1.0);
    d.inputs(i, 0) = w;
    d.outputs[i] = coeffs[0] + coeffs[1] * w + coeffs[2] * w * w + coeffs[3] * w * w * w;
  }
  const Eigen::VectorXd fit = fit_polynomial_least_squares(d, 3);
  for (int c = 0; c < 4; ++c) CHECK(fit[c] == doctest::Approx(coeffs[c]).epsilon(1e-9));
}

TEST_CASE("fit_engine_curve tracks the least-squares oracle") {
  RngStream rng(99);
  const EngineCurveModel model;
  Eigen::VectorXd truth(4);
  truth << 60.0, 700.0, -420.0, 40.0;

  MihpoOptions options;
  options.R = 2000;
  options.eta = 5;
  options.seed = 5;
  const ParamSpace space = default_engine_space();

  SUBCASE("noiseless cubic data is fit almost perfectly") {
    Dataset d;
    d.inputs.resize(120, 1);
    d.outputs.resize(120);
    for (Eigen::Index i = 0; i < 120; ++i) {
      d.inputs(i, 0) = rng.uniform(0.0, 1.0);
      d.outputs[i] = model.predict(d.inputs.row(i).transpose(), truth);
    }
    // linear annealing passes through small step sizes briefly, so a exact
    // fit needs a tighter exploration schedule than the noisy defaults
    MihpoOptions precise = options;
    precise.R = 10000;
    precise.sigma_max_frac = 0.02;
    precise.sigma_min_frac = 1e-8;
    const auto result = fit_engine_curve(d, space, precise, 20.0);
    const double variance =
        (d.outputs.array() - d.outputs.mean()).square().sum() / static_cast<double>(d.size());
    CHECK(*result.report.best_config.loss < 1e-6 * variance);
    CHECK(result.params.throttle == 20.0);
  }

  SUBCASE("noisy data comes within 5% of the closed-form fit") {
    Dataset d;
    d.inputs.resize(200, 1);
    d.outputs.resize(200);
    for (Eigen::Index i = 0; i < 200; ++i) {
      d.inputs(i, 0) = rng.uniform(0.0, 1.0);
      d.outputs[i] = model.predict(d.inputs.row(i).transpose(), truth) + 15.0 * rng.normal();
    }
    const auto result = fit_engine_curve(d, space, options);
    CHECK(*result.report.best_config.loss <= 1.05 * result.least_squares_loss);
  }

  SUBCASE("constant data is fit as well as least squares") {
    Dataset d;
    d.inputs.resize(80, 1);
    d.outputs.resize(80);
    for (Eigen::Index i = 0; i < 80; ++i) {
      d.inputs(i, 0) = rng.uniform(0.0, 1.0);
      d.outputs[i] = 42.0;
    }
    MihpoOptions precise = options;
    precise.R = 10000;
    precise.sigma_max_frac = 0.02;
    precise.sigma_min_frac = 1e-8;
    const auto result = fit_engine_curve(d, space, precise);
    // LS hits the constant exactly; the stochastic fit matches it to
    // within 1e-5 of the squared level
    CHECK(*result.report.best_config.loss <= result.least_squares_loss + 1e-5 * 42.0 * 42.0);
    const double mean_pred =
        model.predict_batch(d.inputs, result.params.to_vector()).mean();
    CHECK(mean_pred == doctest::Approx(42.0).epsilon(0.01));
  }
}

TEST_CASE("fit_tire recovers a noiseless tire curve") {
  const TireModel model;
  SyntheticSpec spec;
  spec.ground_truth = TireParams{9.5, 1.4, 5200.0, 0.008, -150.0}.to_vector();
  spec.input_range = {{-0.12, 0.12}};
  spec.n_samples = 400;
  spec.noise_std = 0.0;
  spec.seed = 8;
  const Dataset d = generate_synthetic(model, spec);

  MihpoOptions options;
  options.R = 2000;
  options.eta = 5;
  options.seed = 3;
  const auto result = fit_tire(d, default_tire_space(), options);
  // near-zero loss against the variance scale of the outputs
  const double variance =
      (d.outputs.array() - d.outputs.mean()).square().sum() / static_cast<double>(d.size());
  CHECK(*result.report.best_config.loss < 1e-4 * variance);
}

TEST_CASE("model registry") {
  CHECK(make_model("tire")->param_count() == 5);
  CHECK(make_model("engine_curve")->param_count() == 4);
  CHECK_THROWS_AS(make_model("unknown"), InputError);
}

}  // TEST_SUITE
