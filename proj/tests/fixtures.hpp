#pragma once

// Shared placeholder fixtures for tests: a self-consistent (non-physical)
// vehicle, axle tire curves, an engine surface, and controller settings.

#include <vector>

#include "mihpo/engine_map.hpp"
#include "mihpo/lqr.hpp"
#include "mihpo/models.hpp"
#include "mihpo/planning.hpp"
#include "mihpo/sim.hpp"

namespace fixtures {

inline mihpo::VehicleParams vehicle() { return mihpo::placeholder_vehicle(); }

inline mihpo::BicycleGeometry geometry() { return {1.6, 1.4, 1000.0}; }

inline mihpo::AxleTires axle_tires() {
  mihpo::AxleTires tires;
  tires.front = {9.5, 1.4, 5200.0, 0.008, -150.0};
  tires.rear = {10.2, 1.45, 5600.0, 0.006, -120.0};
  return tires;
}

inline mihpo::AxleTires symmetric_tires() {
  mihpo::AxleTires tires;
  tires.front = {9.5, 1.4, 5200.0, 0.0, 0.0};
  tires.rear = {10.2, 1.45, 5600.0, 0.0, 0.0};
  return tires;
}

/// Synthetic engine surface: a cubic speed profile scaled by throttle.
inline double engine_surface(double w_norm, double throttle) {
  const double base = 50.0 + 650.0 * w_norm - 300.0 * w_norm * w_norm -
                      80.0 * w_norm * w_norm * w_norm;
  return (0.08 + 0.92 * throttle / 100.0) * base;
}

inline std::vector<mihpo::DynoSample> dyno_samples() {
  std::vector<mihpo::DynoSample> samples;
  const mihpo::VehicleParams vp = vehicle();
  for (double tau : {0.0, 30.0, 40.0, 60.0, 80.0, 100.0}) {
    for (double rpm = 800.0; rpm <= 7000.0; rpm += 620.0) {
      samples.push_back({tau, rpm, engine_surface(rpm / vp.w_e_max, tau)});
    }
  }
  return samples;
}

/// Cubic curves at the low-throttle labels, exact on the surface.
inline std::vector<mihpo::EngineCurveParams> fitted_curves() {
  std::vector<mihpo::EngineCurveParams> curves;
  for (double tau : {5.0, 15.0, 20.0}) {
    const double scale = 0.08 + 0.92 * tau / 100.0;
    curves.push_back({scale * 50.0, scale * 650.0, scale * -300.0, scale * -80.0, tau});
  }
  return curves;
}

inline mihpo::EngineTorqueMap engine_map() {
  std::vector<double> speed_grid;
  for (double rpm = 800.0; rpm <= 7000.0; rpm += 310.0) speed_grid.push_back(rpm);
  return mihpo::build_engine_map(fitted_curves(), dyno_samples(), vehicle(),
                                 {0, 5, 10, 15, 20, 30, 40, 50, 60, 70, 80, 90, 100}, speed_grid);
}

inline mihpo::LqrGainTable gain_table() {
  const mihpo::AxleTires tires = axle_tires();
  // per-side stiffness: half of each axle-level fit
  const double c_af = 0.5 * mihpo::cornering_stiffness(tires.front);
  const double c_ar = 0.5 * mihpo::cornering_stiffness(tires.rear);
  const Eigen::Matrix4d Q = Eigen::Vector4d(2.0, 0.05, 8.0, 0.3).asDiagonal();
  std::vector<double> breakpoints;
  for (double v = 5.0; v <= 60.0; v += 5.0) breakpoints.push_back(v);
  return mihpo::lqr_gain_table(c_af, c_ar, vehicle().m, geometry(), Q, 15.0, breakpoints);
}

inline mihpo::PlannerParams planner(double mu) {
  const mihpo::AxleTires tires = axle_tires();
  mihpo::PlannerParams planner;
  planner.mu = mu;
  planner.peak_force_front = mihpo::tire_peak_force(tires.front, {-0.25, 0.25});
  planner.peak_force_rear = mihpo::tire_peak_force(tires.rear, {-0.25, 0.25});
  planner.v_cap = 45.0;
  return planner;
}

}  // namespace fixtures
