#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mihpo/dataset.hpp"
#include "mihpo/optimizer.hpp"

namespace mihpo {

// ---------------------------------------------------------------------------
// Tire model: offset magic formula
//   F_y(alpha) = D * sin(C * atan(B * (alpha + S_x))) + S_y
// ---------------------------------------------------------------------------

struct TireParams {
  double B = 10.0;   // stiffness factor [-]
  double C = 1.5;    // shape factor [-]
  double D = 5000.0; // peak factor [N]
  double S_x = 0.0;  // horizontal shift [rad]
  double S_y = 0.0;  // vertical shift [N]

  Eigen::VectorXd to_vector() const;
  static TireParams from_vector(const Eigen::Ref<const Eigen::VectorXd>& v);
  static std::vector<std::string> param_names() { return {"B", "C", "D", "S_x", "S_y"}; }
};

template <typename Scalar>
Scalar tire_lateral_force(Scalar alpha, Scalar B, Scalar C, Scalar D, Scalar S_x, Scalar S_y) {
  using std::atan;
  using std::sin;
  return D * sin(C * atan(B * (alpha + S_x))) + S_y;
}

inline double tire_lateral_force(double alpha, const TireParams& p) {
  return tire_lateral_force(alpha, p.B, p.C, p.D, p.S_x, p.S_y);
}

/// Slope dF_y/dalpha of the tire curve; at alpha = -S_x this equals B*C*D.
double tire_force_slope(double alpha, const TireParams& p);

// ---------------------------------------------------------------------------
// Engine torque curve: cubic in normalized engine speed, one curve per
// discrete throttle command
//   T_e(w) = p0 + p1*w + p2*w^2 + p3*w^3,  w = w_e / w_e_max in [0, 1]
// ---------------------------------------------------------------------------

struct EngineCurveParams {
  double p0 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;  // [N*m] over normalized speed
  double throttle = 100.0;                        // throttle label (0, 100]

  Eigen::VectorXd to_vector() const;
  static EngineCurveParams from_vector(const Eigen::Ref<const Eigen::VectorXd>& v,
                                       double throttle);
  static std::vector<std::string> param_names() { return {"p0", "p1", "p2", "p3"}; }
};

template <typename Scalar>
Scalar engine_torque_poly(Scalar w_norm, Scalar p0, Scalar p1, Scalar p2, Scalar p3) {
  return p0 + w_norm * (p1 + w_norm * (p2 + w_norm * p3));
}

/// Evaluate the cubic at w_norm in [0, 1]; out-of-range inputs are an
/// error (silent clamping would hide bad data), enforced with a throw.
double engine_torque(double w_norm, const EngineCurveParams& p);

// ---------------------------------------------------------------------------
// Brake: affine placeholder mapping brake force to a pedal command
// ---------------------------------------------------------------------------

/// pedal = F_brake / k_b, saturated to [0, 100]. Requires F_brake >= 0.
double brake_force_to_pedal(double brake_force, double k_b);

// ---------------------------------------------------------------------------
// Vehicle constants and drive-log ingestion
// ---------------------------------------------------------------------------

/// Chassis and driveline constants. The repo ships a placeholder fixture
/// (placeholder_vehicle) whose numbers are self-consistent but not tied to
/// any physical platform.
struct VehicleParams {
  double m = 750.0;        // total mass [kg]
  double m_s = 680.0;      // sprung mass [kg]
  double C_d = 1.2;        // drag coefficient [N*s^2/m^2]
  double C_r = 120.0;      // rolling resistance [N]
  double h_a = 0.30;       // roll height [m]
  double R_w = 0.30;       // wheel radius [m]
  double eta_t = 0.95;     // transmission efficiency (0, 1]
  double i_0 = 3.0;        // final reducer ratio
  std::vector<double> gear_ratios = {3.0, 2.2, 1.7, 1.4, 1.2, 1.0};
  double w_e_max = 7000.0; // maximum engine speed [rpm]
  double track_width = 1.6;                            // [m]
  Eigen::Vector4d nominal_loads{1700.0, 1733.0, 1940.0, 1982.0};  // LF, RF, LR, RR [N]

  void validate() const;
};

VehicleParams placeholder_vehicle();

struct DriveLogSample {
  double v_x = 0.0;       // [m/s]
  double a_x = 0.0;       // [m/s^2]
  double w_e = 0.0;       // engine speed [rpm]
  int gear = 1;           // 1-based index into gear_ratios
  double throttle = 0.0;  // [%]
};

std::vector<DriveLogSample> load_drive_log(const std::string& path,
                                           std::int64_t* rejected_rows = nullptr);

/// Invert the longitudinal force balance on each log sample,
///   F_x = m*a_x + C_d*v_x^2 + C_r,   T_e = F_x * R_w / (eta_t * i_g * i_0),
/// and group the (w_e / w_e_max, T_e) pairs into one dataset per throttle
/// label. Samples farther than `bin_tolerance` percent from every label,
/// or with engine speed outside [0, w_e_max], are dropped (count returned
/// via dropped_samples). Throws on an unknown gear index.
std::map<double, Dataset> derive_engine_samples(const std::vector<DriveLogSample>& log,
                                                const VehicleParams& vp,
                                                const std::vector<double>& throttle_labels,
                                                double bin_tolerance = 2.0,
                                                std::int64_t* dropped_samples = nullptr);

// ---------------------------------------------------------------------------
// Model interface used by the MSE objective and the fitting front-ends
// ---------------------------------------------------------------------------

class ParametricModel {
 public:
  virtual ~ParametricModel() = default;
  virtual std::string name() const = 0;
  virtual Eigen::Index param_count() const = 0;
  virtual Eigen::Index input_dim() const = 0;
  virtual double predict(const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& params) const = 0;
  /// Batch prediction over dataset rows; overridden where a vectorized
  /// path matters (the optimizers call this in their hot loop).
  virtual Eigen::VectorXd predict_batch(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                        const Eigen::Ref<const Eigen::VectorXd>& params) const;
};

class TireModel final : public ParametricModel {
 public:
  std::string name() const override { return "tire"; }
  Eigen::Index param_count() const override { return 5; }
  Eigen::Index input_dim() const override { return 1; }
  double predict(const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& params) const override;
  Eigen::VectorXd predict_batch(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                const Eigen::Ref<const Eigen::VectorXd>& params) const override;
};

class EngineCurveModel final : public ParametricModel {
 public:
  std::string name() const override { return "engine_curve"; }
  Eigen::Index param_count() const override { return 4; }
  Eigen::Index input_dim() const override { return 1; }
  double predict(const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& params) const override;
  Eigen::VectorXd predict_batch(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                const Eigen::Ref<const Eigen::VectorXd>& params) const override;
};

/// Model lookup by the names used in configs and params files
/// ("tire", "engine_curve"). Throws InputError for unknown names.
std::unique_ptr<ParametricModel> make_model(const std::string& name);

// ---------------------------------------------------------------------------
// Fitting front-ends
// ---------------------------------------------------------------------------

struct TireFitResult {
  TireParams params;
  OptimizationReport report;
};

TireFitResult fit_tire(const Dataset& data, const ParamSpace& space, const MihpoOptions& options);

/// Closed-form least-squares polynomial fit (Vandermonde + QR); the
/// independent reference the black-box engine fit is judged against.
Eigen::VectorXd fit_polynomial_least_squares(const Dataset& data, int degree);

struct EngineFitResult {
  EngineCurveParams params;
  OptimizationReport report;
  double least_squares_loss = 0.0;  // loss of the closed-form cubic on the same data
};

EngineFitResult fit_engine_curve(const Dataset& data, const ParamSpace& space,
                                 const MihpoOptions& options, double throttle_label = 100.0);

/// Conventional search-space defaults for the two model families; used by
/// the CLI when a config omits explicit parameter specs.
ParamSpace default_tire_space();
ParamSpace default_engine_space();

}  // namespace mihpo
