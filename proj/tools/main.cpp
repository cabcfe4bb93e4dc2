// Command-line front end: offline identification, map building, planning,
// gain design, and the closed-loop simulation, wired to the file formats
// described in the README.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mihpo/baselines.hpp"
#include "mihpo/dataset.hpp"
#include "mihpo/engine_map.hpp"
#include "mihpo/errors.hpp"
#include "mihpo/io.hpp"
#include "mihpo/lqr.hpp"
#include "mihpo/models.hpp"
#include "mihpo/optimizer.hpp"
#include "mihpo/planning.hpp"
#include "mihpo/sim.hpp"

namespace {

using namespace mihpo;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitUsage = 64;

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << "{\"error\": {\"kind\": \"" << kind << "\", \"message\": \"" << message << "\"}}\n";
}

struct ManifestScope {
  RunManifest manifest;
  std::string path;

  ManifestScope(std::string command, std::string manifest_path)
      : path(std::move(manifest_path)) {
    manifest.command = std::move(command);
    manifest.started_at = iso_timestamp_now();
  }
  void finish() {
    manifest.finished_at = iso_timestamp_now();
    write_manifest(manifest, path);
  }
};

std::pair<std::vector<std::string>, std::string> dataset_columns(const std::string& model) {
  if (model == "tire") return {{"alpha_rad"}, "fy_n"};
  if (model == "engine_curve") return {{"engine_speed_norm"}, "torque_nm"};
  throw InputError("unknown model '" + model + "' (expected tire|engine_curve)");
}

ParamSpace space_for(const OptimizerConfig& config, const std::string& model) {
  if (config.space.size() > 0) return config.space;
  return model == "tire" ? default_tire_space() : default_engine_space();
}

std::vector<std::string> param_names_for(const std::string& model) {
  return model == "tire" ? TireParams::param_names() : EngineCurveParams::param_names();
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (!field.empty()) values.push_back(std::stod(field));
  }
  return values;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitArgs {
  std::string config_path;
  std::string data_path;
  std::string model = "tire";
  std::string method;  // empty = config's method
  std::string out_params = "params.json";
  std::string out_report = "report.json";
  std::string out_curve = "loss_curve.csv";
  double throttle = 100.0;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

int cmd_fit(const FitArgs& args) {
  OptimizerConfig config = load_optimizer_config(args.config_path);
  if (args.seed) config.seed = *args.seed;
  const std::string method = args.method.empty() ? config.method : args.method;

  const auto [input_cols, output_col] = dataset_columns(args.model);
  const Dataset data = load_csv(args.data_path, input_cols, output_col);
  const ParamSpace space = space_for(config, args.model);
  const auto model = make_model(args.model);
  if (space.size() != model->param_count()) {
    throw InputError("config has " + std::to_string(space.size()) + " params but model '" +
                     args.model + "' needs " + std::to_string(model->param_count()));
  }
  const ObjectiveFn objective = [&](const Eigen::VectorXd& p) {
    return mse_objective(*model, p, data);
  };

  OptimizationReport report;
  if (method == "mihpo") {
    MihpoOptions options = config.mihpo_options();
    options.jobs = args.jobs;
    report = run_mihpo(space, objective, options);
  } else if (method == "gbo") {
    report = run_gbo(space, objective, config.gbo, config.seed);
  } else if (method == "pso") {
    PsoSettings settings = config.pso;
    settings.jobs = args.jobs;
    report = run_pso(space, objective, settings, config.seed);
  } else {
    throw InputError("unknown method '" + method + "' (expected mihpo|gbo|pso)");
  }

  if (!report.best_config.loss) throw NumericError("fit produced no finite loss");

  std::vector<std::string> names = param_names_for(args.model);
  Eigen::VectorXd values = report.best_config.values;
  if (args.model == "engine_curve") {
    names.push_back("throttle");
    values.conservativeResize(5);
    values[4] = args.throttle;
  }

  ManifestScope scope("fit", args.out_params + ".manifest.json");
  scope.manifest.config_path = args.config_path;
  scope.manifest.inputs = {args.data_path};
  scope.manifest.outputs = {args.out_params, args.out_report, args.out_curve};
  scope.manifest.seed = config.seed;

  save_params_json(args.model, names, values, *report.best_config.loss, args.out_params);
  save_report_json(report, args.out_report);
  save_loss_curve_csv(report, args.out_curve);
  scope.finish();

  std::cout << "fit " << args.model << " via " << method << ": loss "
            << format_double(*report.best_config.loss) << " after " << report.total_evaluations
            << " evaluations\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string spec_path;
  std::string out_path = "data.csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> n_samples;
};

int cmd_generate(const GenerateArgs& args) {
  std::string model_name;
  SyntheticSpec spec = load_synthetic_spec(args.spec_path, &model_name);
  if (args.seed) spec.seed = *args.seed;
  if (args.n_samples) spec.n_samples = *args.n_samples;

  const auto model = make_model(model_name);
  const Dataset data = generate_synthetic(*model, spec);
  const auto [input_cols, output_col] = dataset_columns(model_name);

  ManifestScope scope("generate", args.out_path + ".manifest.json");
  scope.manifest.config_path = args.spec_path;
  scope.manifest.outputs = {args.out_path};
  scope.manifest.seed = spec.seed;

  save_csv(data, args.out_path, input_cols, output_col);
  scope.finish();
  std::cout << "generated " << data.size() << " samples for model " << model_name << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct CompareArgs {
  std::string config_path;
  std::string data_path;
  std::string model = "tire";
  std::string out_path = "compare.csv";
  int n_seeds = 5;
  std::optional<std::int64_t> budget;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

int cmd_compare(const CompareArgs& args) {
  OptimizerConfig config = load_optimizer_config(args.config_path);
  if (args.seed) config.seed = *args.seed;

  const auto [input_cols, output_col] = dataset_columns(args.model);
  const Dataset data = load_csv(args.data_path, input_cols, output_col);
  const ParamSpace space = space_for(config, args.model);
  const auto model = make_model(args.model);
  const ObjectiveFn objective = [&](const Eigen::VectorXd& p) {
    return mse_objective(*model, p, data);
  };

  std::vector<MethodSpec> methods = config.methods;
  if (methods.empty()) {
    methods.push_back({"mihpo", "mihpo", config.gbo, config.pso});
    methods.push_back({"gbo", "gbo", config.gbo, config.pso});
    methods.push_back({"pso", "pso", config.gbo, config.pso});
  }

  // every method gets the evaluation budget of the bandit schedule
  const std::int64_t budget =
      args.budget ? *args.budget : build_schedule(config.R, config.eta).total_evaluations();

  std::string csv = "method,seed,evaluations,best_loss\n";
  for (const MethodSpec& spec : methods) {
    for (int s = 0; s < args.n_seeds; ++s) {
      const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(s);
      OptimizationReport report;
      if (spec.kind == "mihpo") {
        MihpoOptions options = config.mihpo_options();
        options.seed = seed;
        options.jobs = args.jobs;
        report = run_mihpo(space, objective, options);
      } else if (spec.kind == "gbo") {
        GboSettings settings = spec.gbo;
        settings.max_evaluations = budget;
        report = run_gbo(space, objective, settings, seed);
      } else {
        PsoSettings settings = spec.pso;
        settings.max_evaluations = budget;
        settings.jobs = args.jobs;
        report = run_pso(space, objective, settings, seed);
      }
      if (spec.kind == "mihpo" && report.total_evaluations != budget && !args.budget) {
        throw NumericError("schedule budget mismatch");  // accounting invariant
      }
      for (const LossCurvePoint& point : report.loss_curve) {
        csv += spec.name + ',' + std::to_string(s) + ',' + std::to_string(point.evaluations) +
               ',' + format_double(point.best_loss) + '\n';
      }
    }
  }

  ManifestScope scope("compare", args.out_path + ".manifest.json");
  scope.manifest.config_path = args.config_path;
  scope.manifest.inputs = {args.data_path};
  scope.manifest.outputs = {args.out_path};
  scope.manifest.seed = config.seed;

  std::ofstream out(args.out_path);
  if (!out) throw InputError("cannot write '" + args.out_path + "'");
  out << csv;
  out.close();
  scope.finish();
  std::cout << "compared " << methods.size() << " methods x " << args.n_seeds
            << " seeds at budget " << budget << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// build-engine-map
// ---------------------------------------------------------------------------

struct MapArgs {
  std::vector<std::string> fitted_paths;
  std::string dyno_path;
  std::string vehicle_path;
  std::string throttle_grid;  // comma list, empty = known labels
  double speed_min = 800.0;
  double speed_max = 7000.0;
  int speed_count = 21;
  std::string out_map = "engine_map.csv";
  std::string out_provenance = "engine_map_provenance.csv";
};

int cmd_build_engine_map(const MapArgs& args) {
  const VehicleParams vp =
      args.vehicle_path.empty() ? placeholder_vehicle() : load_vehicle_json(args.vehicle_path);

  std::vector<EngineCurveParams> fitted;
  for (const std::string& path : args.fitted_paths) {
    const FittedParams params = load_params_json(path);
    if (params.model != "engine_curve") {
      throw InputError("'" + path + "' is not an engine_curve params file");
    }
    const double throttle = params.values.size() > 4 ? params.values[4] : 100.0;
    fitted.push_back(EngineCurveParams::from_vector(params.values.head(4), throttle));
  }
  std::vector<DynoSample> dyno;
  if (!args.dyno_path.empty()) dyno = load_dyno_csv(args.dyno_path);

  std::vector<double> speed_grid;
  if (args.speed_count < 2) throw InputError("speed grid needs at least 2 nodes");
  for (int i = 0; i < args.speed_count; ++i) {
    speed_grid.push_back(args.speed_min + (args.speed_max - args.speed_min) * i /
                                              (args.speed_count - 1));
  }

  std::int64_t repaired = 0;
  const EngineTorqueMap map = build_engine_map(fitted, dyno, vp,
                                               parse_double_list(args.throttle_grid), speed_grid,
                                               &repaired);

  ManifestScope scope("build-engine-map", args.out_map + ".manifest.json");
  scope.manifest.inputs = args.fitted_paths;
  if (!args.dyno_path.empty()) scope.manifest.inputs.push_back(args.dyno_path);
  if (!args.vehicle_path.empty()) scope.manifest.inputs.push_back(args.vehicle_path);
  scope.manifest.outputs = {args.out_map, args.out_provenance};

  save_engine_map_csv(map, args.out_map, args.out_provenance);
  scope.finish();
  std::cout << "engine map: " << map.speed_grid.size() << " x " << map.throttle_grid.size()
            << " cells, " << repaired << " repaired\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// plan
// ---------------------------------------------------------------------------

struct PlanArgs {
  std::string track_path;
  std::string oval;  // "straight,radius,spacing"
  std::string front_params;
  std::string rear_params;
  std::string vehicle_path;
  double mu = 0.7;
  double v_cap = 45.0;
  double alpha_max = 0.25;
  std::string out_path = "velocity_plan.csv";
};

TireParams tire_from_file(const std::string& path) {
  const FittedParams params = load_params_json(path);
  if (params.model != "tire") throw InputError("'" + path + "' is not a tire params file");
  return TireParams::from_vector(params.values);
}

TrackPath track_from_args(const std::string& track_path, const std::string& oval) {
  if (!track_path.empty()) return load_track_csv(track_path);
  const std::vector<double> dims = parse_double_list(oval);
  if (dims.size() != 3) throw InputError("--oval expects 'straight,radius,spacing'");
  return make_oval(dims[0], dims[1], dims[2]);
}

int cmd_plan(const PlanArgs& args) {
  const VehicleParams vp =
      args.vehicle_path.empty() ? placeholder_vehicle() : load_vehicle_json(args.vehicle_path);
  const TrackPath track = track_from_args(args.track_path, args.oval);
  const TireParams front = tire_from_file(args.front_params);
  const TireParams rear = tire_from_file(args.rear_params);

  PlannerParams planner;
  planner.mu = args.mu;
  planner.peak_force_front = tire_peak_force(front, {-args.alpha_max, args.alpha_max});
  planner.peak_force_rear = tire_peak_force(rear, {-args.alpha_max, args.alpha_max});
  planner.v_cap = args.v_cap;
  planner.validate();

  // quasi-static plan: nominal loads, straight steering, no yaw coupling
  const double a_y_max = max_lateral_accel(planner.mu * planner.peak_force_front,
                                           planner.mu * planner.peak_force_rear, 0.0, 0.0, 0.0,
                                           vp.m);

  ManifestScope scope("plan", args.out_path + ".manifest.json");
  scope.manifest.inputs = {args.front_params, args.rear_params};
  if (!args.track_path.empty()) scope.manifest.inputs.push_back(args.track_path);
  scope.manifest.outputs = {args.out_path};

  std::ofstream out(args.out_path);
  if (!out) throw InputError("cannot write '" + args.out_path + "'");
  out << "s,kappa,v_des\n";
  for (size_t i = 0; i < track.s.size(); ++i) {
    out << format_double(track.s[i]) << ',' << format_double(track.kappa[i]) << ','
        << format_double(plan_velocity(track.kappa[i], a_y_max, planner.v_cap)) << '\n';
  }
  out.close();
  scope.finish();
  std::cout << "planned " << track.s.size() << " samples, a_y_max "
            << format_double(a_y_max) << " m/s^2\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// lqr-gains
// ---------------------------------------------------------------------------

struct LqrArgs {
  std::string front_params;
  std::string rear_params;
  std::string vehicle_path;
  double l_f = 1.6;
  double l_r = 1.4;
  double I_z = 1000.0;
  std::string q_diag = "2.0,0.05,8.0,0.3";
  double r_weight = 15.0;
  std::string breakpoints = "10,15,20,25,30,35,40,45,50,55,60";
  double stiffness_scale = 0.5;  // axle fit -> per-side stiffness
  std::string out_path = "lqr_gains.json";
};

int cmd_lqr_gains(const LqrArgs& args) {
  const VehicleParams vp =
      args.vehicle_path.empty() ? placeholder_vehicle() : load_vehicle_json(args.vehicle_path);
  const TireParams front = tire_from_file(args.front_params);
  const TireParams rear = tire_from_file(args.rear_params);
  const double c_af = args.stiffness_scale * cornering_stiffness(front);
  const double c_ar = args.stiffness_scale * cornering_stiffness(rear);

  const std::vector<double> q = parse_double_list(args.q_diag);
  if (q.size() != 4) throw InputError("--q-diag expects 4 comma-separated weights");
  const Eigen::Matrix4d Q = Eigen::Vector4d(q[0], q[1], q[2], q[3]).asDiagonal();
  const std::vector<double> breakpoints = parse_double_list(args.breakpoints);

  const BicycleGeometry geo{args.l_f, args.l_r, args.I_z};
  const LqrGainTable table = lqr_gain_table(c_af, c_ar, vp.m, geo, Q, args.r_weight, breakpoints);

  ManifestScope scope("lqr-gains", args.out_path + ".manifest.json");
  scope.manifest.inputs = {args.front_params, args.rear_params};
  scope.manifest.outputs = {args.out_path};

  save_gains_json(table, args.out_path);
  scope.finish();
  std::cout << "designed " << table.intervals.size() << " velocity-scheduled gains\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sim
// ---------------------------------------------------------------------------

struct SimArgs {
  std::string track_path;
  std::string oval = "400,200,2";
  std::string gains_path;
  std::string map_path;
  std::string provenance_path;
  std::string front_params;
  std::string rear_params;
  std::string vehicle_path;
  double mu = 0.7;
  double v_cap = 45.0;
  double dt = 0.01;
  int laps = 1;
  std::string out_path = "sim_trace.csv";
};

int cmd_sim(const SimArgs& args) {
  const VehicleParams vp =
      args.vehicle_path.empty() ? placeholder_vehicle() : load_vehicle_json(args.vehicle_path);
  const TrackPath track = track_from_args(args.track_path, args.oval);
  const LqrGainTable gains = load_gains_json(args.gains_path);
  const EngineTorqueMap map = load_engine_map_csv(args.map_path, args.provenance_path);

  AxleTires tires;
  tires.front = tire_from_file(args.front_params);
  tires.rear = tire_from_file(args.rear_params);

  PlannerParams planner;
  planner.mu = args.mu;
  planner.peak_force_front = tire_peak_force(tires.front, {-0.25, 0.25});
  planner.peak_force_rear = tire_peak_force(tires.rear, {-0.25, 0.25});
  planner.v_cap = args.v_cap;

  SimOptions options;
  options.dt = args.dt;
  options.n_laps = args.laps;

  const BicycleGeometry geo{1.6, 1.4, 1000.0};
  const LapResult result = run_lap(track, planner, gains, map, tires, vp, geo, options);

  ManifestScope scope("sim", args.out_path + ".manifest.json");
  scope.manifest.inputs = {args.gains_path, args.map_path, args.front_params, args.rear_params};
  scope.manifest.outputs = {args.out_path};

  save_trace_csv(result.trace, args.out_path);
  scope.finish();

  if (!result.completed) {
    throw NumericError("simulation failed: " + result.failure + " (trace written to " +
                       args.out_path + ")");
  }
  std::cout << "completed " << args.laps << " lap(s): max |e_y| "
            << format_double(result.max_abs_e_y) << " m, min corner speed "
            << format_double(result.min_corner_speed) << " m/s\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model parameter identification and model-based planning toolkit"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "fit a parametric model to a dataset");
  fit->add_option("--config", fit_args.config_path, "optimizer config JSON")->required();
  fit->add_option("--data", fit_args.data_path, "dataset CSV")->required();
  fit->add_option("--model", fit_args.model, "tire|engine_curve");
  fit->add_option("--method", fit_args.method, "mihpo|gbo|pso (default: config)");
  fit->add_option("--out-params", fit_args.out_params);
  fit->add_option("--out-report", fit_args.out_report);
  fit->add_option("--out-curve", fit_args.out_curve);
  fit->add_option("--throttle", fit_args.throttle, "throttle label for engine fits");
  fit->add_option("--seed", fit_args.seed, "override the config seed");
  fit->add_option("--jobs", fit_args.jobs, "parallel evaluations (1 = deterministic reference)");

  GenerateArgs gen_args;
  CLI::App* gen = app.add_subcommand("generate", "generate a synthetic dataset");
  gen->add_option("--spec", gen_args.spec_path, "synthetic spec JSON")->required();
  gen->add_option("--out", gen_args.out_path);
  gen->add_option("--seed", gen_args.seed);
  gen->add_option("--n", gen_args.n_samples);

  CompareArgs cmp_args;
  CLI::App* cmp = app.add_subcommand("compare", "convergence comparison across optimizers");
  cmp->add_option("--config", cmp_args.config_path)->required();
  cmp->add_option("--data", cmp_args.data_path)->required();
  cmp->add_option("--model", cmp_args.model);
  cmp->add_option("--out", cmp_args.out_path);
  cmp->add_option("--seeds", cmp_args.n_seeds);
  cmp->add_option("--budget", cmp_args.budget, "override the shared evaluation budget");
  cmp->add_option("--seed", cmp_args.seed, "base seed");
  cmp->add_option("--jobs", cmp_args.jobs);

  MapArgs map_args;
  CLI::App* mapcmd = app.add_subcommand("build-engine-map", "merge fitted curves and dyno data");
  mapcmd->add_option("--fitted", map_args.fitted_paths, "engine_curve params JSON(s)");
  mapcmd->add_option("--dyno", map_args.dyno_path, "dyno CSV (throttle_pct,engine_rpm,torque_nm)");
  mapcmd->add_option("--vehicle", map_args.vehicle_path);
  mapcmd->add_option("--throttle-grid", map_args.throttle_grid, "comma list (default: known rows)");
  mapcmd->add_option("--speed-min", map_args.speed_min);
  mapcmd->add_option("--speed-max", map_args.speed_max);
  mapcmd->add_option("--speed-count", map_args.speed_count);
  mapcmd->add_option("--out-map", map_args.out_map);
  mapcmd->add_option("--out-provenance", map_args.out_provenance);

  PlanArgs plan_args;
  CLI::App* plan = app.add_subcommand("plan", "velocity plan over a curvature profile");
  plan->add_option("--track", plan_args.track_path, "track CSV (s,x,y,heading,kappa)");
  plan->add_option("--oval", plan_args.oval, "straight,radius,spacing");
  plan->add_option("--tire-front", plan_args.front_params)->required();
  plan->add_option("--tire-rear", plan_args.rear_params)->required();
  plan->add_option("--vehicle", plan_args.vehicle_path);
  plan->add_option("--mu", plan_args.mu, "tire performance factor");
  plan->add_option("--v-cap", plan_args.v_cap);
  plan->add_option("--out", plan_args.out_path);

  LqrArgs lqr_args;
  CLI::App* lqr = app.add_subcommand("lqr-gains", "velocity-scheduled LQR gain table");
  lqr->add_option("--tire-front", lqr_args.front_params)->required();
  lqr->add_option("--tire-rear", lqr_args.rear_params)->required();
  lqr->add_option("--vehicle", lqr_args.vehicle_path);
  lqr->add_option("--l-f", lqr_args.l_f);
  lqr->add_option("--l-r", lqr_args.l_r);
  lqr->add_option("--i-z", lqr_args.I_z);
  lqr->add_option("--q-diag", lqr_args.q_diag, "diagonal of Q");
  lqr->add_option("--r-weight", lqr_args.r_weight);
  lqr->add_option("--breakpoints", lqr_args.breakpoints, "velocity breakpoints, m/s");
  lqr->add_option("--stiffness-scale", lqr_args.stiffness_scale);
  lqr->add_option("--out", lqr_args.out_path);

  SimArgs sim_args;
  CLI::App* sim = app.add_subcommand("sim", "closed-loop laps on a track");
  sim->add_option("--track", sim_args.track_path);
  sim->add_option("--oval", sim_args.oval, "straight,radius,spacing");
  sim->add_option("--gains", sim_args.gains_path)->required();
  sim->add_option("--map", sim_args.map_path)->required();
  sim->add_option("--provenance", sim_args.provenance_path);
  sim->add_option("--tire-front", sim_args.front_params)->required();
  sim->add_option("--tire-rear", sim_args.rear_params)->required();
  sim->add_option("--vehicle", sim_args.vehicle_path);
  sim->add_option("--mu", sim_args.mu);
  sim->add_option("--v-cap", sim_args.v_cap);
  sim->add_option("--dt", sim_args.dt);
  sim->add_option("--laps", sim_args.laps);
  sim->add_option("--out", sim_args.out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (fit->parsed()) return cmd_fit(fit_args);
    if (gen->parsed()) return cmd_generate(gen_args);
    if (cmp->parsed()) return cmd_compare(cmp_args);
    if (mapcmd->parsed()) return cmd_build_engine_map(map_args);
    if (plan->parsed()) return cmd_plan(plan_args);
    if (lqr->parsed()) return cmd_lqr_gains(lqr_args);
    if (sim->parsed()) return cmd_sim(sim_args);
  } catch (const InputError& e) {
    print_error("input", e.what());
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    print_error("input", e.what());
    return kExitInput;
  } catch (const std::out_of_range& e) {
    print_error("input", e.what());
    return kExitInput;
  } catch (const NumericError& e) {
    print_error("numeric", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}
