#pragma once

#include <string>
#include <vector>

#include "mihpo/engine_map.hpp"
#include "mihpo/lqr.hpp"
#include "mihpo/models.hpp"
#include "mihpo/planning.hpp"

namespace mihpo {

/// Arc-length-parameterized closed centerline.
struct TrackPath {
  std::vector<double> s;        // [m], strictly increasing, last = total length
  std::vector<double> x;        // [m]
  std::vector<double> y;        // [m]
  std::vector<double> heading;  // [rad]
  std::vector<double> kappa;    // [1/m]

  double total_length() const { return s.empty() ? 0.0 : s.back(); }
  std::size_t sample_count() const { return s.size(); }

  /// Index of the sample nearest to (px, py), searched locally around
  /// `hint` (the previous nearest index) so lookup stays O(1) per step.
  std::size_t nearest_index(double px, double py, std::size_t hint) const;

  /// Reference pose at the projection of (px, py) onto the centerline,
  /// interpolated between samples.
  struct Projection {
    std::size_t index = 0;  // nearest sample, usable as the next hint
    double s = 0.0;
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    double kappa = 0.0;
  };
  Projection project(double px, double py, std::size_t hint) const;

  void validate() const;
};

/// Two straights joined by two semicircles; kappa is 0 on the straights
/// and 1/corner_radius on the corners. First and last samples coincide.
TrackPath make_oval(double straight_length, double corner_radius, double sample_spacing);

void save_track_csv(const TrackPath& track, const std::string& path);
TrackPath load_track_csv(const std::string& path);

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double v_x = 0.0;      // [m/s], kept >= 0
  double v_y = 0.0;      // [m/s]
  double psi_dot = 0.0;  // [rad/s]
};

/// Axle-level tire curves driving the plant model.
struct AxleTires {
  TireParams front;
  TireParams rear;
};

/// One RK4 step of the dynamic bicycle model. Slip angles follow the
/// standard kinematic relations with a low-speed kinematic fallback below
/// 1 m/s. F_x is the net longitudinal drive force (negative = braking);
/// drag and rolling resistance act internally. Throws NumericError on a
/// non-finite state; requires dt in (0, 0.02].
VehicleState step(const VehicleState& state, double delta, double F_x, double dt,
                  const AxleTires& tires, const VehicleParams& vp, const BicycleGeometry& geo);

struct SimTraceRow {
  double t = 0.0;
  VehicleState state;
  double delta = 0.0;
  double throttle = 0.0;
  double brake = 0.0;
  double v_des = 0.0;
  double a_y = 0.0;
  double a_y_max = 0.0;
  double e_y = 0.0;
  double e_psi = 0.0;
  double kappa_ref = 0.0;
};

struct SimTrace {
  double dt = 0.0;
  std::vector<SimTraceRow> rows;
};

void save_trace_csv(const SimTrace& trace, const std::string& path);

/// Closed-loop controller knobs. These are harness settings, not model
/// parameters.
struct SimOptions {
  double dt = 0.01;              // [s]
  double v_initial = 15.0;       // [m/s]
  double speed_gain = 1500.0;    // proportional force law [N per m/s]
  double brake_gain = 80.0;      // affine brake model k_b [N per pedal %]
  double steer_limit = 0.35;     // [rad]
  double corridor_half_width = 5.0;  // |e_y| beyond this aborts the lap [m]
  double preview_time = 3.0;     // velocity-plan lookahead horizon [s]
  double preview_step = 5.0;     // lookahead sampling interval [m]
  double a_y_floor = 0.5;        // lower clamp on planned a_y,max [m/s^2]
  int n_laps = 1;
};

struct LapResult {
  SimTrace trace;
  bool completed = false;
  std::string failure;  // empty when completed
  double min_corner_speed = 0.0;   // smallest v_x over corner samples [m/s]
  double max_abs_e_y = 0.0;
  double max_abs_e_psi = 0.0;
};

/// Drive n_laps around the track: velocity planning from the tire limits
/// and load transfer, proportional speed control through the engine map /
/// brake model, and gain-scheduled LQR steering.
LapResult run_lap(const TrackPath& track, const PlannerParams& planner,
                  const LqrGainTable& gains, const EngineTorqueMap& engine_map,
                  const AxleTires& tires, const VehicleParams& vp, const BicycleGeometry& geo,
                  const SimOptions& options);

}  // namespace mihpo
