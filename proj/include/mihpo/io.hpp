#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mihpo/baselines.hpp"
#include "mihpo/lqr.hpp"
#include "mihpo/models.hpp"
#include "mihpo/optimizer.hpp"

namespace mihpo {

inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Optimizer configuration file
// ---------------------------------------------------------------------------

/// Parsed optimizer config:
/// {
///   "params": [{"name", "mean", "std", "min", "max"}, ...],
///   "sigma_max_frac": 0.1, "sigma_min_frac": 0.001,
///   "R": 10000, "eta": 5, "seed": 0,
///   "method": "mihpo" | "gbo" | "pso",
///   "gbo": {"learning_rate", "max_evaluations", "fd_step"},
///   "pso": {"n_particles", "inertia", "cognitive_coeff", "social_coeff",
///           "max_evaluations"}
/// }
/// Everything except "params" has defaults. Compare runs add a "methods"
/// array of {"name", ...setting overrides} entries.
struct MethodSpec {
  std::string name;         // label used in output CSV, e.g. "gbo-small"
  std::string kind;         // "mihpo" | "gbo" | "pso"
  GboSettings gbo;
  PsoSettings pso;
};

struct OptimizerConfig {
  ParamSpace space;
  double sigma_max_frac = 0.1;
  double sigma_min_frac = 0.001;
  std::int64_t R = 10000;
  int eta = 5;
  std::uint64_t seed = 0;
  std::string method = "mihpo";
  GboSettings gbo;
  PsoSettings pso;
  std::vector<MethodSpec> methods;  // for compare runs

  MihpoOptions mihpo_options() const;
};

OptimizerConfig load_optimizer_config(const std::string& path);

// ---------------------------------------------------------------------------
// Reports and fitted parameters
// ---------------------------------------------------------------------------

/// Report JSON. wall_time_seconds is the only non-deterministic field;
/// the curve CSV and params JSON are byte-stable for fixed seeds.
void save_report_json(const OptimizationReport& report, const std::string& path);
void save_loss_curve_csv(const OptimizationReport& report, const std::string& path);

void save_params_json(const std::string& model_name,
                      const std::vector<std::string>& param_names,
                      const Eigen::VectorXd& values, double loss, const std::string& path);

struct FittedParams {
  std::string model;
  std::vector<std::string> names;
  Eigen::VectorXd values;
  double loss = 0.0;
};

FittedParams load_params_json(const std::string& path);

// ---------------------------------------------------------------------------
// Vehicle / synthetic-spec fixtures
// ---------------------------------------------------------------------------

VehicleParams load_vehicle_json(const std::string& path);
void save_vehicle_json(const VehicleParams& vp, const std::string& path);

void save_gains_json(const LqrGainTable& table, const std::string& path);
LqrGainTable load_gains_json(const std::string& path);

SyntheticSpec load_synthetic_spec(const std::string& path, std::string* model_name);

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

/// Provenance record written atomically (temp file + rename) alongside
/// every command output.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string started_at;
  std::string finished_at;
};

void write_manifest(const RunManifest& manifest, const std::string& path);

/// Shortest round-trip decimal form of a double (via std::to_chars), used
/// everywhere numbers are serialized so outputs are byte-reproducible.
std::string format_double(double v);

std::string iso_timestamp_now();

}  // namespace mihpo
