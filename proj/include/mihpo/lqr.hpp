#pragma once

#include <Eigen/Core>

#include <vector>

namespace mihpo {

/// Lateral tracking errors relative to the reference path.
struct LateralErrorState {
  double e_y = 0.0;        // lateral position error [m]
  double e_y_dot = 0.0;    // [m/s]
  double e_psi = 0.0;      // heading error [rad]
  double e_psi_dot = 0.0;  // [rad/s]

  Eigen::Vector4d vector() const { return {e_y, e_y_dot, e_psi, e_psi_dot}; }
};

/// Geometry of the single-track error model.
struct BicycleGeometry {
  double l_f = 1.6;    // CoG to front axle [m]
  double l_r = 1.4;    // CoG to rear axle [m]
  double I_z = 1000.0; // yaw inertia [kg*m^2]
};

/// Velocity-dependent error-state dynamics xi_dot = A(v_x) xi + B u with
/// xi = [e_y, e_y_dot, e_psi, e_psi_dot], u = delta. C_af/C_ar are
/// per-side cornering stiffnesses [N/rad].
Eigen::Matrix4d lateral_error_A(double C_af, double C_ar, double m, const BicycleGeometry& geo,
                                double v_x);
Eigen::Vector4d lateral_error_B(double C_af, double m, const BicycleGeometry& geo);

/// Solve A'X + XA = Q for symmetric X (Kronecker vectorization; fine for
/// the 4x4 systems used here).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

/// Continuous algebraic Riccati equation A'P + PA - PBR^-1B'P + Q = 0 via
/// Newton-Kleinman iteration started from a pole-placement stabilizing
/// gain. Throws NumericError if no stabilizing solution is found or the
/// residual stays above the tolerance.
Eigen::Matrix4d solve_care(const Eigen::Matrix4d& A, const Eigen::Vector4d& B,
                           const Eigen::Matrix4d& Q, double R, double residual_tol = 1e-10);

/// Relative CARE residual |A'P + PA - PBR^-1B'P + Q| / (sum of term norms).
double care_residual(const Eigen::Matrix4d& A, const Eigen::Vector4d& B,
                     const Eigen::Matrix4d& Q, double R, const Eigen::Matrix4d& P);

bool is_hurwitz(const Eigen::MatrixXd& M);

struct LqrInterval {
  double v_low = 0.0;
  double v_high = 0.0;
  double v_rep = 0.0;          // representative velocity (interval midpoint)
  Eigen::RowVector4d gain;     // state-feedback row K
  double riccati_residual = 0.0;
};

/// Gain schedule over piecewise velocity intervals; gains are held
/// constant within an interval (no blending).
struct LqrGainTable {
  std::vector<double> velocity_breakpoints;  // ascending, size = intervals + 1
  std::vector<LqrInterval> intervals;
  Eigen::Matrix4d Q = Eigen::Matrix4d::Identity();
  double R = 1.0;

  const LqrInterval& interval_for(double v_x) const;  // clamped to end intervals
};

/// Design one LQR gain per velocity interval (representative velocity =
/// midpoint): solve the CARE, K = R^-1 B' P, and verify A - B K is
/// Hurwitz with the Riccati residual below residual_tol. Throws
/// NumericError naming the offending interval otherwise.
LqrGainTable lqr_gain_table(double C_af, double C_ar, double m, const BicycleGeometry& geo,
                            const Eigen::Matrix4d& Q, double R,
                            const std::vector<double>& velocity_breakpoints,
                            double residual_tol = 1e-8);

/// delta = -K(v_x) * xi, saturated to [-steer_limit, steer_limit].
double steering_command(const LateralErrorState& xi, double v_x, const LqrGainTable& table,
                        double steer_limit);

}  // namespace mihpo
