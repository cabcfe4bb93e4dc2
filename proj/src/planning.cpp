#include "mihpo/planning.hpp"

#include <cmath>
#include <stdexcept>

#include "mihpo/errors.hpp"

namespace mihpo {

double lateral_load_transfer(double lateral_accel, const VehicleParams& vp) {
  // roll couple m_s * a_y * h_a spread over the track width
  return vp.m_s * lateral_accel * vp.h_a / vp.track_width;
}

double tire_peak_force(const TireParams& p, std::pair<double, double> alpha_range) {
  const auto [lo, hi] = alpha_range;
  if (!(lo < hi)) throw std::invalid_argument("tire_peak_force: empty slip-angle range");

  const auto magnitude = [&](double alpha) { return std::abs(tire_lateral_force(alpha, p)); };

  constexpr int kGridPoints = 2001;
  const double step = (hi - lo) / (kGridPoints - 1);
  double best_alpha = lo;
  double best = magnitude(lo);
  for (int i = 1; i < kGridPoints; ++i) {
    const double alpha = lo + i * step;
    const double f = magnitude(alpha);
    if (f > best) {
      best = f;
      best_alpha = alpha;
    }
  }

  // golden-section refinement on the bracketing cell
  double a = std::max(lo, best_alpha - step);
  double b = std::min(hi, best_alpha + step);
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = magnitude(c);
  double fd = magnitude(d);
  for (int iter = 0; iter < 80 && (b - a) > 1e-14; ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = magnitude(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = magnitude(d);
    }
  }
  return std::max({best, fc, fd});
}

double max_lateral_accel(double f_max_front, double f_max_rear, double delta, double v_x,
                         double psi_dot, double m) {
  if (!(m > 0.0)) throw std::invalid_argument("max_lateral_accel: mass must be positive");
  return (f_max_rear + f_max_front * std::cos(delta) - m * v_x * psi_dot) / m;
}

double plan_velocity(double kappa, double a_y_max, double v_cap) {
  if (a_y_max < 0.0) {
    throw NumericError("plan_velocity: negative lateral acceleration limit (" +
                       std::to_string(a_y_max) + ")");
  }
  if (kappa == 0.0) return v_cap;  // no lateral limit binds on a straight
  return std::min(std::sqrt(a_y_max / std::abs(kappa)), v_cap);
}

void PlannerParams::validate() const {
  if (!(mu > 0.0 && mu <= 1.0)) throw InputError("PlannerParams: mu must be in (0, 1]");
  if (!(peak_force_front > 0.0 && peak_force_rear > 0.0)) {
    throw InputError("PlannerParams: peak forces must be positive");
  }
  if (!(v_cap > 0.0)) throw InputError("PlannerParams: v_cap must be positive");
}

}  // namespace mihpo
