#include "mihpo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mihpo/errors.hpp"
#include "mihpo/io.hpp"

namespace mihpo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

void TrackPath::validate() const {
  const size_t n = s.size();
  if (n < 4) throw InputError("TrackPath: too few samples");
  if (x.size() != n || y.size() != n || heading.size() != n || kappa.size() != n) {
    throw InputError("TrackPath: column lengths differ");
  }
  for (size_t i = 1; i < n; ++i) {
    if (!(s[i] > s[i - 1])) throw InputError("TrackPath: arc length must be strictly increasing");
  }
  const double closure = std::hypot(x.front() - x.back(), y.front() - y.back());
  if (closure > 1e-6) {
    throw InputError("TrackPath: loop not closed (gap " + std::to_string(closure) + " m)");
  }
}

std::size_t TrackPath::nearest_index(double px, double py, std::size_t hint) const {
  const size_t n = s.size() - 1;  // last sample duplicates the first
  auto dist2 = [&](size_t i) {
    const double dx = x[i] - px;
    const double dy = y[i] - py;
    return dx * dx + dy * dy;
  };
  size_t best;
  double best_d;
  if (hint >= n) {  // no usable hint: full scan
    best = 0;
    best_d = dist2(0);
    for (size_t i = 1; i < n; ++i) {
      const double d = dist2(i);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }
  constexpr size_t kWindow = 40;
  best = hint;
  best_d = dist2(hint);
  for (size_t off = 1; off <= kWindow; ++off) {
    const size_t fwd = (hint + off) % n;
    const size_t bwd = (hint + n - off % n) % n;
    const double df = dist2(fwd);
    if (df < best_d) {
      best_d = df;
      best = fwd;
    }
    const double db = dist2(bwd);
    if (db < best_d) {
      best_d = db;
      best = bwd;
    }
  }
  return best;
}

TrackPath::Projection TrackPath::project(double px, double py, std::size_t hint) const {
  const size_t n = s.size() - 1;
  const size_t nearest = nearest_index(px, py, hint);

  // project onto the two segments adjacent to the nearest sample and take
  // the closer foot point
  Projection best;
  best.index = nearest;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int side = -1; side <= 0; ++side) {
    const size_t a = (side == -1) ? (nearest + n - 1) % n : nearest;
    const size_t b = (a + 1) % n;
    const double ax = x[a], ay = y[a];
    const double bx = x[b], by = y[b];
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double fx = ax + t * vx;
    const double fy = ay + t * vy;
    const double d2 = (px - fx) * (px - fx) + (py - fy) * (py - fy);
    if (d2 < best_d2) {
      best_d2 = d2;
      best.x = fx;
      best.y = fy;
      const double seg = (b == 0 ? s[n] : s[b]) - s[a];
      best.s = s[a] + t * seg;
      double dpsi = wrap_angle(heading[b] - heading[a]);
      best.heading = wrap_angle(heading[a] + t * dpsi);
      best.kappa = kappa[a] + t * (kappa[b] - kappa[a]);
    }
  }
  return best;
}

TrackPath make_oval(double straight_length, double corner_radius, double sample_spacing) {
  if (!(straight_length > 0.0 && corner_radius > 0.0 && sample_spacing > 0.0)) {
    throw std::invalid_argument("make_oval: all dimensions must be positive");
  }
  const double total = 2.0 * straight_length + 2.0 * kPi * corner_radius;
  const size_t n = std::max<size_t>(8, static_cast<size_t>(std::llround(total / sample_spacing)));
  const double ds = total / static_cast<double>(n);

  const double L = straight_length;
  const double rho = corner_radius;
  TrackPath track;
  track.s.reserve(n + 1);
  for (size_t k = 0; k <= n; ++k) {
    const double sk = (k == n) ? total : ds * static_cast<double>(k);
    double px, py, heading, kappa;
    if (sk <= L) {  // bottom straight, heading +x
      px = sk;
      py = 0.0;
      heading = 0.0;
      kappa = 0.0;
    } else if (sk <= L + kPi * rho) {  // right semicircle, counterclockwise
      const double theta = -kPi / 2.0 + (sk - L) / rho;
      px = L + rho * std::cos(theta);
      py = rho + rho * std::sin(theta);
      heading = theta + kPi / 2.0;
      kappa = 1.0 / rho;
    } else if (sk <= 2.0 * L + kPi * rho) {  // top straight, heading -x
      px = L - (sk - L - kPi * rho);
      py = 2.0 * rho;
      heading = kPi;
      kappa = 0.0;
    } else {  // left semicircle
      const double theta = kPi / 2.0 + (sk - 2.0 * L - kPi * rho) / rho;
      px = rho * std::cos(theta);
      py = rho + rho * std::sin(theta);
      heading = theta + kPi / 2.0;
      kappa = 1.0 / rho;
    }
    if (k == n) {  // exact closure
      px = 0.0;
      py = 0.0;
      heading = 0.0;
      kappa = 0.0;
    }
    track.s.push_back(sk);
    track.x.push_back(px);
    track.y.push_back(py);
    track.heading.push_back(wrap_angle(heading));
    track.kappa.push_back(kappa);
  }
  track.validate();
  return track;
}

void save_track_csv(const TrackPath& track, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw InputError("save_track_csv: cannot write '" + path + "'");
  file << "s,x,y,heading,kappa\n";
  for (size_t i = 0; i < track.s.size(); ++i) {
    file << format_double(track.s[i]) << ',' << format_double(track.x[i]) << ','
         << format_double(track.y[i]) << ',' << format_double(track.heading[i]) << ','
         << format_double(track.kappa[i]) << '\n';
  }
}

TrackPath load_track_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InputError("load_track_csv: cannot open '" + path + "'");
  std::string line;
  std::getline(file, line);  // header
  TrackPath track;
  while (std::getline(file, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string field;
    double v[5];
    for (int c = 0; c < 5; ++c) {
      if (!std::getline(ss, field, ',')) throw InputError("load_track_csv: short row");
      v[c] = std::stod(field);
    }
    track.s.push_back(v[0]);
    track.x.push_back(v[1]);
    track.y.push_back(v[2]);
    track.heading.push_back(v[3]);
    track.kappa.push_back(v[4]);
  }
  track.validate();
  return track;
}

namespace {

struct StateDerivative {
  double dx, dy, dpsi, dv_x, dv_y, dpsi_dot;
};

/// Lateral axle forces at the current state.
void axle_forces(const VehicleState& st, double delta, const AxleTires& tires,
                 const BicycleGeometry& geo, double* F_yf, double* F_yr) {
  const double alpha_f = delta - std::atan2(st.v_y + geo.l_f * st.psi_dot, st.v_x);
  const double alpha_r = -std::atan2(st.v_y - geo.l_r * st.psi_dot, st.v_x);
  *F_yf = tire_lateral_force(alpha_f, tires.front);
  *F_yr = tire_lateral_force(alpha_r, tires.rear);
}

StateDerivative bicycle_derivative(const VehicleState& st, double delta, double F_x,
                                   const AxleTires& tires, const VehicleParams& vp,
                                   const BicycleGeometry& geo) {
  StateDerivative d;
  d.dx = st.v_x * std::cos(st.psi) - st.v_y * std::sin(st.psi);
  d.dy = st.v_x * std::sin(st.psi) + st.v_y * std::cos(st.psi);
  d.dpsi = st.psi_dot;

  // rolling resistance fades near standstill so the model has a true rest
  // state
  const double rolling = vp.C_r * std::clamp(st.v_x / 0.05, 0.0, 1.0);
  const double resistance = vp.C_d * st.v_x * st.v_x + rolling;

  if (st.v_x >= 1.0) {
    double F_yf, F_yr;
    axle_forces(st, delta, tires, geo, &F_yf, &F_yr);
    d.dv_x = (F_x - F_yf * std::sin(delta) - resistance) / vp.m + st.v_y * st.psi_dot;
    d.dv_y = (F_yf * std::cos(delta) + F_yr) / vp.m - st.v_x * st.psi_dot;
    d.dpsi_dot = (geo.l_f * F_yf * std::cos(delta) - geo.l_r * F_yr) / geo.I_z;
  } else {
    // kinematic fallback: relax v_y and yaw rate toward the kinematic
    // bicycle values
    const double wheelbase = geo.l_f + geo.l_r;
    const double beta = std::atan(geo.l_r * std::tan(delta) / wheelbase);
    const double psi_dot_kin = st.v_x * std::tan(delta) * std::cos(beta) / wheelbase;
    const double v_y_kin = st.v_x * std::tan(beta);
    constexpr double tau = 0.1;
    d.dv_x = (F_x - resistance) / vp.m;
    d.dv_y = (v_y_kin - st.v_y) / tau;
    d.dpsi_dot = (psi_dot_kin - st.psi_dot) / tau;
  }
  return d;
}

VehicleState advance(const VehicleState& st, const StateDerivative& d, double h) {
  VehicleState out;
  out.x = st.x + h * d.dx;
  out.y = st.y + h * d.dy;
  out.psi = st.psi + h * d.dpsi;
  out.v_x = st.v_x + h * d.dv_x;
  out.v_y = st.v_y + h * d.dv_y;
  out.psi_dot = st.psi_dot + h * d.dpsi_dot;
  return out;
}

}  // namespace

VehicleState step(const VehicleState& state, double delta, double F_x, double dt,
                  const AxleTires& tires, const VehicleParams& vp, const BicycleGeometry& geo) {
  if (!(dt > 0.0 && dt <= 0.02)) {
    throw std::invalid_argument("step: dt must be in (0, 0.02], got " + std::to_string(dt));
  }
  const StateDerivative k1 = bicycle_derivative(state, delta, F_x, tires, vp, geo);
  const StateDerivative k2 =
      bicycle_derivative(advance(state, k1, dt / 2.0), delta, F_x, tires, vp, geo);
  const StateDerivative k3 =
      bicycle_derivative(advance(state, k2, dt / 2.0), delta, F_x, tires, vp, geo);
  const StateDerivative k4 = bicycle_derivative(advance(state, k3, dt), delta, F_x, tires, vp, geo);

  VehicleState next = state;
  next.x += dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  next.y += dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
  next.psi = wrap_angle(next.psi + dt / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi));
  next.v_x += dt / 6.0 * (k1.dv_x + 2.0 * k2.dv_x + 2.0 * k3.dv_x + k4.dv_x);
  next.v_y += dt / 6.0 * (k1.dv_y + 2.0 * k2.dv_y + 2.0 * k3.dv_y + k4.dv_y);
  next.psi_dot += dt / 6.0 * (k1.dpsi_dot + 2.0 * k2.dpsi_dot + 2.0 * k3.dpsi_dot + k4.dpsi_dot);

  if (next.v_x < 0.0) next.v_x = 0.0;
  const bool finite = std::isfinite(next.x) && std::isfinite(next.y) && std::isfinite(next.psi) &&
                      std::isfinite(next.v_x) && std::isfinite(next.v_y) &&
                      std::isfinite(next.psi_dot);
  if (!finite) throw NumericError("step: state became non-finite");
  return next;
}

void save_trace_csv(const SimTrace& trace, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw InputError("save_trace_csv: cannot write '" + path + "'");
  file << "t,x,y,psi,v_x,v_y,psi_dot,delta,throttle,brake,v_des,a_y,a_y_max,e_y,e_psi,kappa_ref\n";
  for (const SimTraceRow& r : trace.rows) {
    file << format_double(r.t) << ',' << format_double(r.state.x) << ','
         << format_double(r.state.y) << ',' << format_double(r.state.psi) << ','
         << format_double(r.state.v_x) << ',' << format_double(r.state.v_y) << ','
         << format_double(r.state.psi_dot) << ',' << format_double(r.delta) << ','
         << format_double(r.throttle) << ',' << format_double(r.brake) << ','
         << format_double(r.v_des) << ',' << format_double(r.a_y) << ','
         << format_double(r.a_y_max) << ',' << format_double(r.e_y) << ','
         << format_double(r.e_psi) << ',' << format_double(r.kappa_ref) << '\n';
  }
}

namespace {

/// First gear (highest to lowest ratio) keeping the engine below its
/// ceiling; falls back to the longest gear.
size_t select_gear(double v_x, const VehicleParams& vp) {
  const double w_wheel_rpm = v_x / vp.R_w * 60.0 / (2.0 * kPi);
  for (size_t g = 0; g < vp.gear_ratios.size(); ++g) {
    const double w_e = w_wheel_rpm * vp.gear_ratios[g] * vp.i_0;
    if (w_e <= 0.93 * vp.w_e_max) return g;
  }
  return vp.gear_ratios.size() - 1;
}

}  // namespace

LapResult run_lap(const TrackPath& track, const PlannerParams& planner,
                  const LqrGainTable& gains, const EngineTorqueMap& engine_map,
                  const AxleTires& tires, const VehicleParams& vp, const BicycleGeometry& geo,
                  const SimOptions& options) {
  track.validate();
  planner.validate();
  vp.validate();
  engine_map.validate();

  LapResult result;
  result.trace.dt = options.dt;
  if (options.n_laps <= 0) {
    result.completed = true;
    return result;
  }

  const double total_length = track.total_length();
  const double target_distance = static_cast<double>(options.n_laps) * total_length;
  const double max_time = 600.0 * options.n_laps + 600.0;

  // axle share of the sprung load splits the transfer between the axles
  const double front_nominal = vp.nominal_loads[0] + vp.nominal_loads[1];
  const double rear_nominal = vp.nominal_loads[2] + vp.nominal_loads[3];
  const double front_share = front_nominal / (front_nominal + rear_nominal);

  double max_kappa = 0.0;
  for (double k : track.kappa) max_kappa = std::max(max_kappa, std::abs(k));

  VehicleState state;
  state.x = track.x[0];
  state.y = track.y[0];
  state.psi = track.heading[0];
  state.v_x = options.v_initial;

  size_t idx = 0;
  double progress = 0.0;
  double s_prev = track.s[0];
  double delta = 0.0;
  double min_corner_speed = std::numeric_limits<double>::infinity();

  const size_t max_steps = static_cast<size_t>(max_time / options.dt);
  for (size_t step_count = 0; step_count < max_steps; ++step_count) {
    const double t = static_cast<double>(step_count) * options.dt;

    const TrackPath::Projection ref = track.project(state.x, state.y, idx);
    idx = ref.index;
    const double kappa_ref = ref.kappa;

    // tracking errors
    const double nx = -std::sin(ref.heading);
    const double ny = std::cos(ref.heading);
    LateralErrorState xi;
    xi.e_y = (state.x - ref.x) * nx + (state.y - ref.y) * ny;
    xi.e_psi = wrap_angle(state.psi - ref.heading);
    xi.e_y_dot = state.v_y * std::cos(xi.e_psi) + state.v_x * std::sin(xi.e_psi);
    xi.e_psi_dot = state.psi_dot - state.v_x * kappa_ref;

    if (std::abs(xi.e_y) > options.corridor_half_width) {
      result.failure = "left the track corridor at t=" + std::to_string(t) + " s (e_y=" +
                       std::to_string(xi.e_y) + " m)";
      break;
    }

    // planner: usable lateral force from the load-transfer-scaled peaks
    const double a_y_est = state.v_x * state.psi_dot;
    const double transfer = lateral_load_transfer(a_y_est, vp);
    const double dw_f = transfer * front_share;
    const double dw_r = transfer * (1.0 - front_share);
    // a_y > 0 in a left turn loads the right-hand side
    const double lf_load = std::max(0.0, vp.nominal_loads[0] - dw_f);
    const double rf_load = std::max(0.0, vp.nominal_loads[1] + dw_f);
    const double lr_load = std::max(0.0, vp.nominal_loads[2] - dw_r);
    const double rr_load = std::max(0.0, vp.nominal_loads[3] + dw_r);
    const double f_max_front =
        0.5 * (max_tire_force(planner.mu, lf_load, vp.nominal_loads[0], planner.peak_force_front) +
               max_tire_force(planner.mu, rf_load, vp.nominal_loads[1], planner.peak_force_front));
    const double f_max_rear =
        0.5 * (max_tire_force(planner.mu, lr_load, vp.nominal_loads[2], planner.peak_force_rear) +
               max_tire_force(planner.mu, rr_load, vp.nominal_loads[3], planner.peak_force_rear));
    const double a_y_max =
        std::max(options.a_y_floor,
                 max_lateral_accel(f_max_front, f_max_rear, delta, state.v_x, state.psi_dot, vp.m));

    double v_des = plan_velocity(kappa_ref, a_y_max, planner.v_cap);

    // preview for braking: at steady cornering the yaw coupling halves the
    // static allowance (a_y = F/m - a_y), so upcoming corners are planned
    // at the fixed point of the limit equations
    const double a_y_static =
        std::max(options.a_y_floor,
                 max_lateral_accel(f_max_front, f_max_rear, delta, 0.0, 0.0, vp.m));
    const double preview = std::max(options.preview_step, state.v_x * options.preview_time);
    for (double ahead = options.preview_step; ahead <= preview; ahead += options.preview_step) {
      const double s_q = std::fmod(ref.s + ahead, total_length);
      const auto it = std::upper_bound(track.s.begin(), track.s.end(), s_q);
      const size_t qi = std::min(track.s.size() - 1,
                                 static_cast<size_t>(std::max<std::ptrdiff_t>(
                                     0, it - track.s.begin() - 1)));
      v_des = std::min(v_des, plan_velocity(track.kappa[qi], 0.5 * a_y_static, planner.v_cap));
    }

    // longitudinal: proportional force law through the engine map or brake
    const double f_cmd = options.speed_gain * (v_des - state.v_x);
    double throttle = 0.0;
    double brake = 0.0;
    double f_applied = 0.0;
    if (f_cmd >= 0.0) {
      const size_t gear = select_gear(state.v_x, vp);
      const double i_g = vp.gear_ratios[gear];
      const double w_e_raw = state.v_x / vp.R_w * 60.0 / (2.0 * kPi) * i_g * vp.i_0;
      const double w_e =
          std::clamp(w_e_raw, engine_map.speed_grid.front(), engine_map.speed_grid.back());
      const double torque_des = f_cmd * vp.R_w / (vp.eta_t * i_g * vp.i_0);
      throttle = inverse_throttle(engine_map, w_e, torque_des);
      const double torque = engine_map.torque_at(w_e, throttle);
      f_applied = torque * vp.eta_t * i_g * vp.i_0 / vp.R_w;
    } else {
      brake = brake_force_to_pedal(-f_cmd, options.brake_gain);
      f_applied = -brake * options.brake_gain;
    }

    delta = steering_command(xi, state.v_x, gains, options.steer_limit);

    // realized lateral acceleration for the trace
    double F_yf = 0.0, F_yr = 0.0;
    if (state.v_x >= 1.0) axle_forces(state, delta, tires, geo, &F_yf, &F_yr);
    const double a_y = (F_yf * std::cos(delta) + F_yr) / vp.m;

    SimTraceRow row;
    row.t = t;
    row.state = state;
    row.delta = delta;
    row.throttle = throttle;
    row.brake = brake;
    row.v_des = v_des;
    row.a_y = a_y;
    row.a_y_max = a_y_max;
    row.e_y = xi.e_y;
    row.e_psi = xi.e_psi;
    row.kappa_ref = kappa_ref;
    result.trace.rows.push_back(row);

    result.max_abs_e_y = std::max(result.max_abs_e_y, std::abs(xi.e_y));
    result.max_abs_e_psi = std::max(result.max_abs_e_psi, std::abs(xi.e_psi));
    if (max_kappa > 0.0 && std::abs(kappa_ref) > 0.5 * max_kappa &&
        progress > 0.25 * total_length) {
      min_corner_speed = std::min(min_corner_speed, state.v_x);
    }

    try {
      state = step(state, delta, f_applied, options.dt, tires, vp, geo);
    } catch (const NumericError& err) {
      result.failure = err.what();
      break;
    }

    // lap progress with wraparound
    const double s_now = ref.s;
    double ds = s_now - s_prev;
    if (ds < -0.5 * total_length) ds += total_length;
    if (ds > 0.5 * total_length) ds -= total_length;
    progress += ds;
    s_prev = s_now;
    if (progress >= target_distance) {
      result.completed = true;
      break;
    }
  }

  if (!result.completed && result.failure.empty()) {
    result.failure = "lap not completed within the simulation time limit";
  }
  result.min_corner_speed = std::isfinite(min_corner_speed) ? min_corner_speed : 0.0;
  return result;
}

}  // namespace mihpo
