#include "mihpo/models.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <iostream>

#include "mihpo/errors.hpp"

namespace mihpo {

Eigen::VectorXd TireParams::to_vector() const {
  Eigen::VectorXd v(5);
  v << B, C, D, S_x, S_y;
  return v;
}

TireParams TireParams::from_vector(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != 5) throw std::invalid_argument("TireParams: expected 5 values");
  return {v[0], v[1], v[2], v[3], v[4]};
}

double tire_force_slope(double alpha, const TireParams& p) {
  const double u = p.B * (alpha + p.S_x);
  // ordered so the slope at alpha = -S_x is bitwise B*C*D
  return p.B * p.C * p.D * (std::cos(p.C * std::atan(u)) / (1.0 + u * u));
}

Eigen::VectorXd EngineCurveParams::to_vector() const {
  Eigen::VectorXd v(4);
  v << p0, p1, p2, p3;
  return v;
}

EngineCurveParams EngineCurveParams::from_vector(const Eigen::Ref<const Eigen::VectorXd>& v,
                                                 double throttle) {
  if (v.size() != 4) throw std::invalid_argument("EngineCurveParams: expected 4 values");
  return {v[0], v[1], v[2], v[3], throttle};
}

double engine_torque(double w_norm, const EngineCurveParams& p) {
  if (!(w_norm >= 0.0 && w_norm <= 1.0)) {
    throw std::invalid_argument("engine_torque: normalized speed " + std::to_string(w_norm) +
                                " outside [0, 1]");
  }
  return engine_torque_poly(w_norm, p.p0, p.p1, p.p2, p.p3);
}

double brake_force_to_pedal(double brake_force, double k_b) {
  if (brake_force < 0.0) throw std::invalid_argument("brake_force_to_pedal: force must be >= 0");
  if (!(k_b > 0.0)) throw std::invalid_argument("brake_force_to_pedal: k_b must be positive");
  return std::clamp(brake_force / k_b, 0.0, 100.0);
}

void VehicleParams::validate() const {
  const bool positive = m > 0 && m_s > 0 && C_d > 0 && C_r > 0 && h_a > 0 && R_w > 0 && i_0 > 0 &&
                        w_e_max > 0 && track_width > 0;
  if (!positive) throw InputError("VehicleParams: all constants must be positive");
  if (!(eta_t > 0.0 && eta_t <= 1.0)) throw InputError("VehicleParams: eta_t must be in (0, 1]");
  if (gear_ratios.empty()) throw InputError("VehicleParams: gear_ratios empty");
  for (double g : gear_ratios) {
    if (!(g > 0)) throw InputError("VehicleParams: gear ratios must be positive");
  }
  if ((nominal_loads.array() <= 0.0).any()) {
    throw InputError("VehicleParams: nominal loads must be positive");
  }
}

VehicleParams placeholder_vehicle() { return VehicleParams{}; }

std::vector<DriveLogSample> load_drive_log(const std::string& path, std::int64_t* rejected_rows) {
  std::int64_t rejected = 0;
  const Dataset raw =
      load_csv(path, {"v_x", "a_x", "engine_rpm", "gear", "throttle_pct"}, "throttle_pct",
               &rejected);
  if (rejected_rows) *rejected_rows = rejected;
  std::vector<DriveLogSample> log;
  log.reserve(static_cast<size_t>(raw.size()));
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    DriveLogSample sample;
    sample.v_x = raw.inputs(i, 0);
    sample.a_x = raw.inputs(i, 1);
    sample.w_e = raw.inputs(i, 2);
    sample.gear = static_cast<int>(std::lround(raw.inputs(i, 3)));
    sample.throttle = raw.inputs(i, 4);
    log.push_back(sample);
  }
  return log;
}

std::map<double, Dataset> derive_engine_samples(const std::vector<DriveLogSample>& log,
                                                const VehicleParams& vp,
                                                const std::vector<double>& throttle_labels,
                                                double bin_tolerance,
                                                std::int64_t* dropped_samples) {
  if (log.empty()) throw InputError("derive_engine_samples: empty drive log");
  if (throttle_labels.empty()) throw InputError("derive_engine_samples: no throttle labels");
  vp.validate();

  std::map<double, std::vector<std::pair<double, double>>> bins;
  for (double label : throttle_labels) bins[label] = {};
  std::int64_t dropped = 0;

  for (const DriveLogSample& sample : log) {
    if (sample.gear < 1 || static_cast<size_t>(sample.gear) > vp.gear_ratios.size()) {
      throw InputError("derive_engine_samples: gear " + std::to_string(sample.gear) +
                       " outside the vehicle's gear range");
    }
    // nearest label within the bin tolerance, else drop the sample
    double best_label = throttle_labels.front();
    double best_dist = std::abs(sample.throttle - best_label);
    for (double label : throttle_labels) {
      const double dist = std::abs(sample.throttle - label);
      if (dist < best_dist) {
        best_dist = dist;
        best_label = label;
      }
    }
    const double w_norm = sample.w_e / vp.w_e_max;
    if (best_dist > bin_tolerance || w_norm < 0.0 || w_norm > 1.0) {
      ++dropped;
      continue;
    }

    const double i_g = vp.gear_ratios[static_cast<size_t>(sample.gear - 1)];
    const double traction = vp.m * sample.a_x + vp.C_d * sample.v_x * sample.v_x + vp.C_r;
    const double torque = traction * vp.R_w / (vp.eta_t * i_g * vp.i_0);
    bins[best_label].emplace_back(w_norm, torque);
  }

  if (dropped > 0) {
    std::cerr << "warning: derive_engine_samples dropped " << dropped
              << " sample(s) outside the throttle bins or engine speed range\n";
  }
  if (dropped_samples) *dropped_samples = dropped;

  std::map<double, Dataset> result;
  for (auto& [label, samples] : bins) {
    if (samples.empty()) continue;
    Dataset data;
    data.name = "engine_throttle_" + std::to_string(label);
    data.inputs.resize(static_cast<Eigen::Index>(samples.size()), 1);
    data.outputs.resize(static_cast<Eigen::Index>(samples.size()));
    for (size_t i = 0; i < samples.size(); ++i) {
      data.inputs(static_cast<Eigen::Index>(i), 0) = samples[i].first;
      data.outputs[static_cast<Eigen::Index>(i)] = samples[i].second;
    }
    result.emplace(label, std::move(data));
  }
  return result;
}

Eigen::VectorXd ParametricModel::predict_batch(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                               const Eigen::Ref<const Eigen::VectorXd>& params) const {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = predict(X.row(i).transpose(), params);
  return out;
}

double TireModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& params) const {
  return tire_lateral_force(x[0], params[0], params[1], params[2], params[3], params[4]);
}

Eigen::VectorXd TireModel::predict_batch(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                         const Eigen::Ref<const Eigen::VectorXd>& params) const {
  // optimizer hot path: plain loop over the slip-angle column
  const double B = params[0], C = params[1], D = params[2], S_x = params[3], S_y = params[4];
  const Eigen::Index n = X.rows();
  Eigen::VectorXd out(n);
  const double* alpha = X.data();  // single column, column-major
  double* dst = out.data();
  for (Eigen::Index i = 0; i < n; ++i) {
    dst[i] = D * std::sin(C * std::atan(B * (alpha[i] + S_x))) + S_y;
  }
  return out;
}

double EngineCurveModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 const Eigen::Ref<const Eigen::VectorXd>& params) const {
  return engine_torque_poly(x[0], params[0], params[1], params[2], params[3]);
}

Eigen::VectorXd EngineCurveModel::predict_batch(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                                const Eigen::Ref<const Eigen::VectorXd>& params) const {
  const Eigen::ArrayXd w = X.col(0).array();
  return (params[0] + w * (params[1] + w * (params[2] + w * params[3]))).matrix();
}

std::unique_ptr<ParametricModel> make_model(const std::string& name) {
  if (name == "tire") return std::make_unique<TireModel>();
  if (name == "engine_curve") return std::make_unique<EngineCurveModel>();
  throw InputError("make_model: unknown model '" + name + "' (expected tire|engine_curve)");
}

TireFitResult fit_tire(const Dataset& data, const ParamSpace& space, const MihpoOptions& options) {
  data.validate();
  if (space.size() != 5) throw std::invalid_argument("fit_tire: space must have 5 parameters");
  TireModel model;
  const ObjectiveFn objective = [&](const Eigen::VectorXd& p) {
    return mse_objective(model, p, data);
  };
  OptimizationReport report = run_mihpo(space, objective, options);
  TireFitResult result;
  result.params = TireParams::from_vector(report.best_config.values);
  result.report = std::move(report);
  return result;
}

Eigen::VectorXd fit_polynomial_least_squares(const Dataset& data, int degree) {
  data.validate();
  if (data.input_dim() != 1) {
    throw std::invalid_argument("fit_polynomial_least_squares: expects one input column");
  }
  if (degree < 0) throw std::invalid_argument("fit_polynomial_least_squares: degree must be >= 0");
  Eigen::MatrixXd vandermonde(data.size(), degree + 1);
  vandermonde.col(0).setOnes();
  for (int d = 1; d <= degree; ++d) {
    vandermonde.col(d) = vandermonde.col(d - 1).array() * data.inputs.col(0).array();
  }
  return vandermonde.colPivHouseholderQr().solve(data.outputs);
}

EngineFitResult fit_engine_curve(const Dataset& data, const ParamSpace& space,
                                 const MihpoOptions& options, double throttle_label) {
  data.validate();
  if (space.size() != 4) throw std::invalid_argument("fit_engine_curve: space must have 4 parameters");
  EngineCurveModel model;
  const ObjectiveFn objective = [&](const Eigen::VectorXd& p) {
    return mse_objective(model, p, data);
  };
  OptimizationReport report = run_mihpo(space, objective, options);

  EngineFitResult result;
  result.params = EngineCurveParams::from_vector(report.best_config.values, throttle_label);
  result.least_squares_loss =
      mse_objective(model, fit_polynomial_least_squares(data, 3), data);
  result.report = std::move(report);
  return result;
}

ParamSpace default_tire_space() {
  return ParamSpace({{"B", 10.0, 4.0, 1.0, 25.0},
                     {"C", 1.5, 0.5, 0.5, 3.0},
                     {"D", 5000.0, 1500.0, 500.0, 10000.0},
                     {"S_x", 0.0, 0.01, -0.05, 0.05},
                     {"S_y", 0.0, 150.0, -600.0, 600.0}});
}

ParamSpace default_engine_space() {
  return ParamSpace({{"p0", 0.0, 100.0, -500.0, 500.0},
                     {"p1", 0.0, 200.0, -1500.0, 1500.0},
                     {"p2", 0.0, 200.0, -1500.0, 1500.0},
                     {"p3", 0.0, 200.0, -1500.0, 1500.0}});
}

}  // namespace mihpo
