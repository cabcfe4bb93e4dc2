#pragma once

#include <utility>

#include "mihpo/models.hpp"

namespace mihpo {

/// Lateral load transfer from the roll couple m_s * a_y * h_a, divided by
/// the track width. Returns the per-side load shift Delta W [N]; sign
/// follows the lateral acceleration. Per-axle application is the caller's
/// choice.
double lateral_load_transfer(double lateral_accel, const VehicleParams& vp);

/// Maximum absolute lateral force of the tire curve over a slip-angle
/// range: coarse grid scan plus golden-section refinement around the best
/// cell. Throws std::invalid_argument on an empty range.
double tire_peak_force(const TireParams& p, std::pair<double, double> alpha_range);

/// a_y,max = (F_max_r + F_max_f * cos(delta) - m * v_x * psi_dot) / m
double max_lateral_accel(double f_max_front, double f_max_rear, double delta, double v_x,
                         double psi_dot, double m);

/// De-rated usable peak force of one tire: mu * (F_z / F_z_nominal) * F_peak.
inline double max_tire_force(double mu, double load, double nominal_load, double peak_force) {
  return mu * (load / nominal_load) * peak_force;
}

/// v_des = min(sqrt(a_y_max / |kappa|), v_cap); straight segments
/// (kappa = 0) return the cap since no lateral limit binds. Negative
/// a_y_max is an upstream misconfiguration and throws.
double plan_velocity(double kappa, double a_y_max, double v_cap);

/// Linear-range cornering stiffness of the tire curve, B*C*D; equals the
/// analytic slope dF_y/dalpha at alpha = -S_x.
inline double cornering_stiffness(const TireParams& p) { return p.B * p.C * p.D; }

/// Usable-force planner inputs shared by the velocity planner and the
/// simulation loop.
struct PlannerParams {
  double mu = 0.7;            // tire performance factor (0, 1]
  double peak_force_front = 0.0;  // axle peak [N]
  double peak_force_rear = 0.0;   // axle peak [N]
  double v_cap = 45.0;        // hard velocity ceiling [m/s]

  void validate() const;
};

}  // namespace mihpo
