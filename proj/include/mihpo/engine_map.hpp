#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "mihpo/models.hpp"

namespace mihpo {

/// Where a torque-map row came from.
enum class MapProvenance : char {
  kFitted = 'F',
  kDyno = 'D',
  kInterpolated = 'I',
};

/// Dyno measurements: scattered (throttle %, engine speed rpm, torque N*m)
/// triples, grouped by throttle when the map is built.
struct DynoSample {
  double throttle = 0.0;
  double speed_rpm = 0.0;
  double torque_nm = 0.0;
};

std::vector<DynoSample> load_dyno_csv(const std::string& path);

/// 2-D torque lookup table T_e(w_e, tau_t). Rows follow speed_grid,
/// columns follow throttle_grid; both grids strictly ascending. Torque is
/// non-decreasing along the throttle axis (enforced at build time).
struct EngineTorqueMap {
  std::vector<double> throttle_grid;  // [%]
  std::vector<double> speed_grid;     // [rpm]
  Eigen::MatrixXd torque;             // speed x throttle [N*m]
  std::vector<MapProvenance> provenance;  // per throttle column

  /// Torque at (w_e, throttle), bilinear between grid nodes. w_e outside
  /// the speed grid throws; throttle is clamped to the grid ends.
  double torque_at(double w_e_rpm, double throttle) const;

  void validate() const;
};

/// Assemble the lookup table from fitted curves and dyno rows. Fitted
/// curves are sampled on the speed grid (normalized by vp.w_e_max); dyno
/// samples are grouped by throttle and linearly resampled onto the grid.
/// Fitted curves win where both sources give the same throttle. Requested
/// throttle rows between known rows are linearly interpolated; rows
/// outside the known range copy the nearest known row. Columns violating
/// monotonicity in throttle are repaired by isotonic projection with a
/// stderr warning (count returned via repaired_cells).
///
/// An empty throttle_grid requests exactly the known labels.
EngineTorqueMap build_engine_map(const std::vector<EngineCurveParams>& fitted,
                                 const std::vector<DynoSample>& dyno, const VehicleParams& vp,
                                 std::vector<double> throttle_grid,
                                 std::vector<double> speed_grid,
                                 std::int64_t* repaired_cells = nullptr);

/// Smallest throttle whose torque at w_e meets T_des, linearly
/// interpolated between the bracketing throttle rows. Saturates at the
/// ends of the throttle grid; w_e outside the speed grid throws.
double inverse_throttle(const EngineTorqueMap& map, double w_e_rpm, double torque_desired);

void save_engine_map_csv(const EngineTorqueMap& map, const std::string& map_path,
                         const std::string& provenance_path = "");
EngineTorqueMap load_engine_map_csv(const std::string& map_path,
                                    const std::string& provenance_path = "");

}  // namespace mihpo
