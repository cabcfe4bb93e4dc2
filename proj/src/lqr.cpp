#include "mihpo/lqr.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "mihpo/errors.hpp"

namespace mihpo {

Eigen::Matrix4d lateral_error_A(double C_af, double C_ar, double m, const BicycleGeometry& geo,
                                double v_x) {
  if (!(v_x > 0.0)) throw std::invalid_argument("lateral_error_A: v_x must be positive");
  if (!(m > 0.0) || !(geo.I_z > 0.0)) {
    throw std::invalid_argument("lateral_error_A: mass and inertia must be positive");
  }
  const double lf = geo.l_f, lr = geo.l_r, Iz = geo.I_z;
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  A(0, 1) = 1.0;
  A(1, 1) = -(2.0 * C_af + 2.0 * C_ar) / (m * v_x);
  A(1, 2) = (2.0 * C_af + 2.0 * C_ar) / m;
  A(1, 3) = (-2.0 * C_af * lf + 2.0 * C_ar * lr) / (m * v_x);
  A(2, 3) = 1.0;
  A(3, 1) = (-2.0 * C_af * lf + 2.0 * C_ar * lr) / (Iz * v_x);
  A(3, 2) = (2.0 * C_af * lf - 2.0 * C_ar * lr) / Iz;
  A(3, 3) = -(2.0 * C_af * lf * lf + 2.0 * C_ar * lr * lr) / (Iz * v_x);
  return A;
}

Eigen::Vector4d lateral_error_B(double C_af, double m, const BicycleGeometry& geo) {
  return {0.0, 2.0 * C_af / m, 0.0, 2.0 * C_af * geo.l_f / geo.I_z};
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n * n, n * n);
  // vec(A'X + XA) = (I (x) A' + A' (x) I) vec(X)
  const Eigen::MatrixXd At = A.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    M.block(i * n, i * n, n, n) += At;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        M(j * n + k, i * n + k) += At(j, i);
      }
    }
  }
  Eigen::VectorXd q(n * n);
  for (Eigen::Index c = 0; c < n; ++c) q.segment(c * n, n) = Q.col(c);
  const Eigen::VectorXd x = M.partialPivLu().solve(q);
  Eigen::MatrixXd X(n, n);
  for (Eigen::Index c = 0; c < n; ++c) X.col(c) = x.segment(c * n, n);
  return 0.5 * (X + X.transpose());
}

bool is_hurwitz(const Eigen::MatrixXd& M) {
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(M);
  return (solver.eigenvalues().real().array() < 0.0).all();
}

namespace {

/// Ackermann pole placement for the single-input pair (A, B): the
/// stabilizing seed for the Newton iteration.
Eigen::RowVector4d place_poles(const Eigen::Matrix4d& A, const Eigen::Vector4d& B,
                               const Eigen::Vector4d& poles) {
  Eigen::Matrix4d ctrb;
  ctrb.col(0) = B;
  for (int i = 1; i < 4; ++i) ctrb.col(i) = A * ctrb.col(i - 1);
  const Eigen::FullPivLU<Eigen::Matrix4d> lu(ctrb);
  if (!lu.isInvertible()) {
    throw NumericError("pole placement: uncontrollable (A, B) pair");
  }
  Eigen::Matrix4d phi = Eigen::Matrix4d::Identity();
  for (int i = 0; i < 4; ++i) phi = phi * (A - poles[i] * Eigen::Matrix4d::Identity());
  const Eigen::RowVector4d last_row = Eigen::RowVector4d::Unit(3);
  return last_row * lu.solve(phi);
}

}  // namespace

double care_residual(const Eigen::Matrix4d& A, const Eigen::Vector4d& B,
                     const Eigen::Matrix4d& Q, double R, const Eigen::Matrix4d& P) {
  const Eigen::Matrix4d AtP = A.transpose() * P;
  const Eigen::Matrix4d PBRBt = P * B * (1.0 / R) * B.transpose() * P;
  const Eigen::Matrix4d residual = AtP + AtP.transpose() - PBRBt + Q;
  const double scale = AtP.norm() + AtP.transpose().norm() + PBRBt.norm() + Q.norm();
  return residual.norm() / std::max(scale, 1e-300);
}

Eigen::Matrix4d solve_care(const Eigen::Matrix4d& A, const Eigen::Vector4d& B,
                           const Eigen::Matrix4d& Q, double R, double residual_tol) {
  if (!(R > 0.0)) throw std::invalid_argument("solve_care: R must be positive");

  // Newton-Kleinman from a pole-placement seed: each step solves the
  // closed-loop Lyapunov equation and refreshes the gain.
  const Eigen::Vector4d seed_poles{-2.0, -3.0, -4.0, -5.0};
  Eigen::RowVector4d K = place_poles(A, B, seed_poles);
  if (!is_hurwitz(A - B * K)) {
    throw NumericError("solve_care: pole placement failed to stabilize the plant");
  }

  Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
  for (int iter = 0; iter < 60; ++iter) {
    const Eigen::Matrix4d A_cl = A - B * K;
    const Eigen::Matrix4d rhs = -(Q + K.transpose() * R * K);
    P = solve_lyapunov(A_cl, rhs);
    K = (1.0 / R) * B.transpose() * P;
    if (care_residual(A, B, Q, R, P) <= residual_tol) return P;
  }
  if (care_residual(A, B, Q, R, P) <= residual_tol) return P;
  throw NumericError("solve_care: Newton iteration did not reach the residual tolerance");
}

const LqrInterval& LqrGainTable::interval_for(double v_x) const {
  if (intervals.empty()) throw NumericError("LqrGainTable: empty table");
  if (v_x <= intervals.front().v_high) return intervals.front();
  if (v_x >= intervals.back().v_low) return intervals.back();
  for (const LqrInterval& interval : intervals) {
    if (v_x >= interval.v_low && v_x < interval.v_high) return interval;
  }
  return intervals.back();
}

LqrGainTable lqr_gain_table(double C_af, double C_ar, double m, const BicycleGeometry& geo,
                            const Eigen::Matrix4d& Q, double R,
                            const std::vector<double>& velocity_breakpoints,
                            double residual_tol) {
  if (velocity_breakpoints.size() < 2) {
    throw std::invalid_argument("lqr_gain_table: need at least 2 velocity breakpoints");
  }
  if (!std::is_sorted(velocity_breakpoints.begin(), velocity_breakpoints.end()) ||
      velocity_breakpoints.front() <= 0.0) {
    throw std::invalid_argument("lqr_gain_table: breakpoints must be positive and ascending");
  }

  LqrGainTable table;
  table.velocity_breakpoints = velocity_breakpoints;
  table.Q = Q;
  table.R = R;

  const Eigen::Vector4d B = lateral_error_B(C_af, m, geo);
  for (size_t i = 0; i + 1 < velocity_breakpoints.size(); ++i) {
    LqrInterval interval;
    interval.v_low = velocity_breakpoints[i];
    interval.v_high = velocity_breakpoints[i + 1];
    interval.v_rep = 0.5 * (interval.v_low + interval.v_high);

    const Eigen::Matrix4d A = lateral_error_A(C_af, C_ar, m, geo, interval.v_rep);
    Eigen::Matrix4d P;
    try {
      P = solve_care(A, B, Q, R, residual_tol);
    } catch (const NumericError& err) {
      throw NumericError("lqr_gain_table: interval [" + std::to_string(interval.v_low) + ", " +
                         std::to_string(interval.v_high) + ") m/s: " + err.what());
    }
    interval.gain = (1.0 / R) * B.transpose() * P;
    interval.riccati_residual = care_residual(A, B, Q, R, P);

    if (!is_hurwitz(A - B * interval.gain)) {
      throw NumericError("lqr_gain_table: closed loop not Hurwitz on interval [" +
                         std::to_string(interval.v_low) + ", " +
                         std::to_string(interval.v_high) + ") m/s");
    }
    table.intervals.push_back(interval);
  }
  return table;
}

double steering_command(const LateralErrorState& xi, double v_x, const LqrGainTable& table,
                        double steer_limit) {
  const LqrInterval& interval = table.interval_for(v_x);
  const double delta = -(interval.gain * xi.vector())(0);
  return std::clamp(delta, -steer_limit, steer_limit);
}

}  // namespace mihpo
