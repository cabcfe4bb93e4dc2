#include "mihpo/engine_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "mihpo/errors.hpp"
#include "mihpo/io.hpp"

namespace mihpo {

namespace {

constexpr double kThrottleMatchEps = 1e-9;

/// Piecewise-linear y(x) with flat extrapolation beyond the end points.
double interp1(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const size_t hi = static_cast<size_t>(it - xs.begin());
  const size_t lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

/// Pool-adjacent-violators projection onto non-decreasing sequences
/// (unweighted L2).
void isotonic_nondecreasing(std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<double> level(n), weight(n);
  std::vector<size_t> length(n);
  size_t blocks = 0;
  for (size_t i = 0; i < n; ++i) {
    level[blocks] = v[i];
    weight[blocks] = 1.0;
    length[blocks] = 1;
    ++blocks;
    while (blocks > 1 && level[blocks - 2] > level[blocks - 1]) {
      const double merged_w = weight[blocks - 2] + weight[blocks - 1];
      level[blocks - 2] =
          (level[blocks - 2] * weight[blocks - 2] + level[blocks - 1] * weight[blocks - 1]) /
          merged_w;
      weight[blocks - 2] = merged_w;
      length[blocks - 2] += length[blocks - 1];
      --blocks;
    }
  }
  size_t idx = 0;
  for (size_t b = 0; b < blocks; ++b) {
    for (size_t k = 0; k < length[b]; ++k) v[idx++] = level[b];
  }
}

}  // namespace

std::vector<DynoSample> load_dyno_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InputError("load_dyno_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(file, line)) throw InputError("load_dyno_csv: '" + path + "' is empty");

  std::vector<DynoSample> samples;
  while (std::getline(file, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string field;
    DynoSample s;
    if (!std::getline(ss, field, ',')) continue;
    s.throttle = std::stod(field);
    if (!std::getline(ss, field, ',')) continue;
    s.speed_rpm = std::stod(field);
    if (!std::getline(ss, field, ',')) continue;
    s.torque_nm = std::stod(field);
    samples.push_back(s);
  }
  if (samples.empty()) throw InputError("load_dyno_csv: no data rows in '" + path + "'");
  return samples;
}

void EngineTorqueMap::validate() const {
  if (throttle_grid.size() < 1 || speed_grid.size() < 2) {
    throw InputError("EngineTorqueMap: need at least 1 throttle and 2 speed nodes");
  }
  if (!std::is_sorted(throttle_grid.begin(), throttle_grid.end()) ||
      std::adjacent_find(throttle_grid.begin(), throttle_grid.end()) != throttle_grid.end()) {
    throw InputError("EngineTorqueMap: throttle grid must be strictly ascending");
  }
  if (!std::is_sorted(speed_grid.begin(), speed_grid.end()) ||
      std::adjacent_find(speed_grid.begin(), speed_grid.end()) != speed_grid.end()) {
    throw InputError("EngineTorqueMap: speed grid must be strictly ascending");
  }
  if (torque.rows() != static_cast<Eigen::Index>(speed_grid.size()) ||
      torque.cols() != static_cast<Eigen::Index>(throttle_grid.size())) {
    throw InputError("EngineTorqueMap: table dimensions do not match the grids");
  }
  if (provenance.size() != throttle_grid.size()) {
    throw InputError("EngineTorqueMap: provenance mask size mismatch");
  }
}

double EngineTorqueMap::torque_at(double w_e_rpm, double throttle) const {
  if (w_e_rpm < speed_grid.front() || w_e_rpm > speed_grid.back()) {
    throw std::out_of_range("EngineTorqueMap: engine speed " + std::to_string(w_e_rpm) +
                            " rpm outside the grid [" + std::to_string(speed_grid.front()) + ", " +
                            std::to_string(speed_grid.back()) + "]");
  }
  const double tau = std::clamp(throttle, throttle_grid.front(), throttle_grid.back());

  const auto upper_s = std::upper_bound(speed_grid.begin(), speed_grid.end(), w_e_rpm);
  size_t s_hi = std::min(static_cast<size_t>(upper_s - speed_grid.begin()), speed_grid.size() - 1);
  if (s_hi == 0) s_hi = 1;
  const size_t s_lo = s_hi - 1;
  const double ws = (w_e_rpm - speed_grid[s_lo]) / (speed_grid[s_hi] - speed_grid[s_lo]);

  if (throttle_grid.size() == 1) {
    return torque(static_cast<Eigen::Index>(s_lo), 0) +
           ws * (torque(static_cast<Eigen::Index>(s_hi), 0) -
                 torque(static_cast<Eigen::Index>(s_lo), 0));
  }

  auto upper_t = std::upper_bound(throttle_grid.begin(), throttle_grid.end(), tau);
  size_t t_hi = std::min(static_cast<size_t>(upper_t - throttle_grid.begin()),
                         throttle_grid.size() - 1);
  if (t_hi == 0) t_hi = 1;
  const size_t t_lo = t_hi - 1;
  const double wt = (tau - throttle_grid[t_lo]) / (throttle_grid[t_hi] - throttle_grid[t_lo]);

  const double lo = torque(static_cast<Eigen::Index>(s_lo), static_cast<Eigen::Index>(t_lo)) +
                    ws * (torque(static_cast<Eigen::Index>(s_hi), static_cast<Eigen::Index>(t_lo)) -
                          torque(static_cast<Eigen::Index>(s_lo), static_cast<Eigen::Index>(t_lo)));
  const double hi = torque(static_cast<Eigen::Index>(s_lo), static_cast<Eigen::Index>(t_hi)) +
                    ws * (torque(static_cast<Eigen::Index>(s_hi), static_cast<Eigen::Index>(t_hi)) -
                          torque(static_cast<Eigen::Index>(s_lo), static_cast<Eigen::Index>(t_hi)));
  return lo + wt * (hi - lo);
}

EngineTorqueMap build_engine_map(const std::vector<EngineCurveParams>& fitted,
                                 const std::vector<DynoSample>& dyno, const VehicleParams& vp,
                                 std::vector<double> throttle_grid,
                                 std::vector<double> speed_grid,
                                 std::int64_t* repaired_cells) {
  if (fitted.empty() && dyno.empty()) {
    throw InputError("build_engine_map: no fitted curves and no dyno data");
  }
  if (speed_grid.size() < 2) throw InputError("build_engine_map: speed grid needs >= 2 nodes");
  std::sort(speed_grid.begin(), speed_grid.end());
  vp.validate();

  const Eigen::Index n_speed = static_cast<Eigen::Index>(speed_grid.size());

  // known rows: throttle label -> (column of torques, provenance)
  std::map<double, std::pair<Eigen::VectorXd, MapProvenance>> known;

  // dyno first so fitted curves win on duplicate labels
  std::map<double, std::vector<std::pair<double, double>>> dyno_groups;
  for (const DynoSample& s : dyno) dyno_groups[s.throttle].emplace_back(s.speed_rpm, s.torque_nm);
  for (auto& [label, points] : dyno_groups) {
    std::sort(points.begin(), points.end());
    std::vector<double> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const auto& [x, y] : points) {
      if (!xs.empty() && x == xs.back()) continue;
      xs.push_back(x);
      ys.push_back(y);
    }
    Eigen::VectorXd column(n_speed);
    for (Eigen::Index i = 0; i < n_speed; ++i) {
      column[i] = interp1(xs, ys, speed_grid[static_cast<size_t>(i)]);
    }
    known[label] = {std::move(column), MapProvenance::kDyno};
  }

  for (const EngineCurveParams& curve : fitted) {
    Eigen::VectorXd column(n_speed);
    for (Eigen::Index i = 0; i < n_speed; ++i) {
      const double w_norm = speed_grid[static_cast<size_t>(i)] / vp.w_e_max;
      if (w_norm < 0.0 || w_norm > 1.0) {
        throw InputError("build_engine_map: speed grid exceeds w_e_max for fitted curves");
      }
      column[i] = engine_torque(w_norm, curve);
    }
    known[curve.throttle] = {std::move(column), MapProvenance::kFitted};
  }

  if (throttle_grid.empty()) {
    for (const auto& [label, row] : known) throttle_grid.push_back(label);
  }
  std::sort(throttle_grid.begin(), throttle_grid.end());
  throttle_grid.erase(std::unique(throttle_grid.begin(), throttle_grid.end()),
                      throttle_grid.end());

  EngineTorqueMap map;
  map.speed_grid = std::move(speed_grid);
  map.throttle_grid = std::move(throttle_grid);
  map.torque.resize(n_speed, static_cast<Eigen::Index>(map.throttle_grid.size()));
  map.provenance.resize(map.throttle_grid.size(), MapProvenance::kInterpolated);

  std::vector<double> known_labels;
  for (const auto& [label, row] : known) known_labels.push_back(label);

  for (size_t c = 0; c < map.throttle_grid.size(); ++c) {
    const double tau = map.throttle_grid[c];
    const auto exact = known.lower_bound(tau - kThrottleMatchEps);
    if (exact != known.end() && std::abs(exact->first - tau) <= kThrottleMatchEps) {
      map.torque.col(static_cast<Eigen::Index>(c)) = exact->second.first;
      map.provenance[c] = exact->second.second;
      continue;
    }
    // interpolate between the bracketing known labels; clamp outside
    const auto upper = std::upper_bound(known_labels.begin(), known_labels.end(), tau);
    if (upper == known_labels.begin()) {
      map.torque.col(static_cast<Eigen::Index>(c)) = known.at(known_labels.front()).first;
    } else if (upper == known_labels.end()) {
      map.torque.col(static_cast<Eigen::Index>(c)) = known.at(known_labels.back()).first;
    } else {
      const double hi = *upper;
      const double lo = *(upper - 1);
      const double w = (tau - lo) / (hi - lo);
      map.torque.col(static_cast<Eigen::Index>(c)) =
          (1.0 - w) * known.at(lo).first + w * known.at(hi).first;
    }
    map.provenance[c] = MapProvenance::kInterpolated;
  }

  // monotone in throttle at fixed speed; repair violations by isotonic
  // projection so the inverse search stays well-posed
  std::int64_t repaired = 0;
  std::vector<double> row(map.throttle_grid.size());
  for (Eigen::Index r = 0; r < n_speed; ++r) {
    for (size_t c = 0; c < row.size(); ++c) row[c] = map.torque(r, static_cast<Eigen::Index>(c));
    std::vector<double> projected = row;
    isotonic_nondecreasing(projected);
    for (size_t c = 0; c < row.size(); ++c) {
      if (projected[c] != row[c]) {
        map.torque(r, static_cast<Eigen::Index>(c)) = projected[c];
        ++repaired;
      }
    }
  }
  if (repaired > 0) {
    std::cerr << "warning: build_engine_map repaired " << repaired
              << " cell(s) violating monotonicity in throttle\n";
  }
  if (repaired_cells) *repaired_cells = repaired;

  map.validate();
  return map;
}

double inverse_throttle(const EngineTorqueMap& map, double w_e_rpm, double torque_desired) {
  map.validate();
  // torque_at throws on out-of-grid speed
  const double floor_torque = map.torque_at(w_e_rpm, map.throttle_grid.front());
  if (torque_desired <= floor_torque) return map.throttle_grid.front();
  const double ceil_torque = map.torque_at(w_e_rpm, map.throttle_grid.back());
  if (torque_desired >= ceil_torque) return map.throttle_grid.back();

  // torque is non-decreasing in throttle: walk to the first row meeting
  // the demand and interpolate within the bracketing cell
  double below = floor_torque;
  for (size_t c = 1; c < map.throttle_grid.size(); ++c) {
    const double above = map.torque_at(w_e_rpm, map.throttle_grid[c]);
    if (above >= torque_desired) {
      const double lo = map.throttle_grid[c - 1];
      const double hi = map.throttle_grid[c];
      if (above == below) return lo;
      return lo + (torque_desired - below) / (above - below) * (hi - lo);
    }
    below = above;
  }
  return map.throttle_grid.back();
}

void save_engine_map_csv(const EngineTorqueMap& map, const std::string& map_path,
                         const std::string& provenance_path) {
  map.validate();
  std::ofstream file(map_path);
  if (!file) throw InputError("save_engine_map_csv: cannot write '" + map_path + "'");
  file << "speed_rpm";
  for (double tau : map.throttle_grid) file << ',' << format_double(tau);
  file << '\n';
  for (size_t r = 0; r < map.speed_grid.size(); ++r) {
    file << format_double(map.speed_grid[r]);
    for (size_t c = 0; c < map.throttle_grid.size(); ++c) {
      file << ',' << format_double(map.torque(static_cast<Eigen::Index>(r),
                                              static_cast<Eigen::Index>(c)));
    }
    file << '\n';
  }

  if (provenance_path.empty()) return;
  std::ofstream prov(provenance_path);
  if (!prov) throw InputError("save_engine_map_csv: cannot write '" + provenance_path + "'");
  prov << "throttle_pct,provenance\n";
  for (size_t c = 0; c < map.throttle_grid.size(); ++c) {
    prov << format_double(map.throttle_grid[c]) << ',' << static_cast<char>(map.provenance[c])
         << '\n';
  }
}

EngineTorqueMap load_engine_map_csv(const std::string& map_path,
                                    const std::string& provenance_path) {
  std::ifstream file(map_path);
  if (!file) throw InputError("load_engine_map_csv: cannot open '" + map_path + "'");
  std::string line;
  if (!std::getline(file, line)) throw InputError("load_engine_map_csv: empty file");

  EngineTorqueMap map;
  {
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');  // corner label
    while (std::getline(ss, field, ',')) map.throttle_grid.push_back(std::stod(field));
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(file, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    map.speed_grid.push_back(std::stod(field));
    std::vector<double> row;
    while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
    if (row.size() != map.throttle_grid.size()) {
      throw InputError("load_engine_map_csv: ragged row in '" + map_path + "'");
    }
    rows.push_back(std::move(row));
  }
  map.torque.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(map.throttle_grid.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) {
      map.torque(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }

  map.provenance.assign(map.throttle_grid.size(), MapProvenance::kInterpolated);
  if (!provenance_path.empty()) {
    std::ifstream prov(provenance_path);
    if (!prov) throw InputError("load_engine_map_csv: cannot open '" + provenance_path + "'");
    std::getline(prov, line);  // header
    size_t c = 0;
    while (std::getline(prov, line) && c < map.provenance.size()) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos || comma + 1 >= line.size()) continue;
      map.provenance[c++] = static_cast<MapProvenance>(line[comma + 1]);
    }
  }
  map.validate();
  return map;
}

}  // namespace mihpo
