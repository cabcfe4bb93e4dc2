#include "mihpo/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mihpo/errors.hpp"

namespace mihpo {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InputError("cannot open '" + path + "'");
  json j;
  try {
    file >> j;
  } catch (const json::parse_error& err) {
    throw InputError("malformed JSON in '" + path + "': " + err.what());
  }
  return j;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream file(tmp);
    if (!file) throw InputError("cannot write '" + tmp + "'");
    file << text;
  }
  std::filesystem::rename(tmp, path);
}

GboSettings parse_gbo(const json& j, GboSettings base) {
  if (j.contains("learning_rate")) base.learning_rate = j.at("learning_rate").get<double>();
  if (j.contains("max_evaluations")) base.max_evaluations = j.at("max_evaluations").get<std::int64_t>();
  if (j.contains("fd_step")) base.fd_step = j.at("fd_step").get<double>();
  return base;
}

PsoSettings parse_pso(const json& j, PsoSettings base) {
  if (j.contains("n_particles")) base.n_particles = j.at("n_particles").get<std::int64_t>();
  if (j.contains("inertia")) base.inertia = j.at("inertia").get<double>();
  if (j.contains("cognitive_coeff")) base.cognitive_coeff = j.at("cognitive_coeff").get<double>();
  if (j.contains("social_coeff")) base.social_coeff = j.at("social_coeff").get<double>();
  if (j.contains("max_evaluations")) base.max_evaluations = j.at("max_evaluations").get<std::int64_t>();
  return base;
}

}  // namespace

MihpoOptions OptimizerConfig::mihpo_options() const {
  MihpoOptions options;
  options.R = R;
  options.eta = eta;
  options.seed = seed;
  options.sigma_max_frac = sigma_max_frac;
  options.sigma_min_frac = sigma_min_frac;
  return options;
}

OptimizerConfig load_optimizer_config(const std::string& path) {
  const json j = load_json_file(path);
  OptimizerConfig config;
  try {
    if (j.contains("params")) {
      std::vector<ParamSpec> specs;
      for (const json& p : j.at("params")) {
        ParamSpec spec;
        spec.name = p.at("name").get<std::string>();
        spec.mean = p.at("mean").get<double>();
        spec.std_dev = p.at("std").get<double>();
        spec.lower = p.at("min").get<double>();
        spec.upper = p.at("max").get<double>();
        specs.push_back(std::move(spec));
      }
      config.space = ParamSpace(std::move(specs));
    }
    if (j.contains("sigma_max_frac")) config.sigma_max_frac = j.at("sigma_max_frac").get<double>();
    if (j.contains("sigma_min_frac")) config.sigma_min_frac = j.at("sigma_min_frac").get<double>();
    if (j.contains("R")) config.R = j.at("R").get<std::int64_t>();
    if (j.contains("eta")) config.eta = j.at("eta").get<int>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("method")) config.method = j.at("method").get<std::string>();
    if (j.contains("gbo")) config.gbo = parse_gbo(j.at("gbo"), config.gbo);
    if (j.contains("pso")) config.pso = parse_pso(j.at("pso"), config.pso);
    if (j.contains("methods")) {
      for (const json& m : j.at("methods")) {
        MethodSpec spec;
        spec.name = m.at("name").get<std::string>();
        spec.kind = m.contains("kind") ? m.at("kind").get<std::string>()
                                       : spec.name.substr(0, spec.name.find('-'));
        spec.gbo = parse_gbo(m, config.gbo);
        spec.pso = parse_pso(m, config.pso);
        if (spec.kind != "mihpo" && spec.kind != "gbo" && spec.kind != "pso") {
          throw InputError("optimizer config: unknown method kind '" + spec.kind + "'");
        }
        config.methods.push_back(std::move(spec));
      }
    }
  } catch (const json::exception& err) {
    throw InputError("optimizer config '" + path + "': " + err.what());
  }
  return config;
}

void save_report_json(const OptimizationReport& report, const std::string& path) {
  json j;
  j["best_config"]["values"] = std::vector<double>(
      report.best_config.values.data(),
      report.best_config.values.data() + report.best_config.values.size());
  if (report.best_config.loss) j["best_config"]["loss"] = *report.best_config.loss;
  j["best_config"]["resource_spent"] = report.best_config.resource_spent;
  j["total_evaluations"] = report.total_evaluations;
  j["wall_time_seconds"] = report.wall_time_seconds;
  j["termination"] = report.termination;
  j["bracket_traces"] = json::array();
  for (const BracketTrace& trace : report.bracket_traces) {
    j["bracket_traces"].push_back({{"s", trace.s}, {"best_loss", trace.best_loss}});
  }
  j["loss_curve"] = json::array();
  for (const LossCurvePoint& point : report.loss_curve) {
    j["loss_curve"].push_back({point.evaluations, point.best_loss});
  }
  write_text_atomic(path, j.dump(2) + "\n");
}

void save_loss_curve_csv(const OptimizationReport& report, const std::string& path) {
  std::string text = "evaluations,best_loss\n";
  for (const LossCurvePoint& point : report.loss_curve) {
    text += std::to_string(point.evaluations);
    text += ',';
    text += format_double(point.best_loss);
    text += '\n';
  }
  write_text_atomic(path, text);
}

void save_params_json(const std::string& model_name,
                      const std::vector<std::string>& param_names,
                      const Eigen::VectorXd& values, double loss, const std::string& path) {
  if (static_cast<Eigen::Index>(param_names.size()) != values.size()) {
    throw std::invalid_argument("save_params_json: name/value count mismatch");
  }
  json j;
  j["model"] = model_name;
  j["params"] = json::object();
  for (size_t i = 0; i < param_names.size(); ++i) {
    j["params"][param_names[i]] = values[static_cast<Eigen::Index>(i)];
  }
  j["loss"] = loss;
  write_text_atomic(path, j.dump(2) + "\n");
}

FittedParams load_params_json(const std::string& path) {
  const json j = load_json_file(path);
  FittedParams fitted;
  try {
    fitted.model = j.at("model").get<std::string>();
    fitted.loss = j.value("loss", 0.0);
    std::vector<std::string> order;
    if (fitted.model == "tire") {
      order = TireParams::param_names();
    } else if (fitted.model == "engine_curve") {
      order = EngineCurveParams::param_names();
      if (j.contains("params") && j.at("params").contains("throttle")) {
        order.push_back("throttle");
      }
    } else {
      for (const auto& [key, value] : j.at("params").items()) order.push_back(key);
    }
    fitted.names = order;
    fitted.values.resize(static_cast<Eigen::Index>(order.size()));
    for (size_t i = 0; i < order.size(); ++i) {
      fitted.values[static_cast<Eigen::Index>(i)] = j.at("params").at(order[i]).get<double>();
    }
  } catch (const json::exception& err) {
    throw InputError("params file '" + path + "': " + err.what());
  }
  return fitted;
}

VehicleParams load_vehicle_json(const std::string& path) {
  const json j = load_json_file(path);
  VehicleParams vp;
  try {
    vp.m = j.at("m").get<double>();
    vp.m_s = j.at("m_s").get<double>();
    vp.C_d = j.at("C_d").get<double>();
    vp.C_r = j.at("C_r").get<double>();
    vp.h_a = j.at("h_a").get<double>();
    vp.R_w = j.at("R_w").get<double>();
    vp.eta_t = j.at("eta_t").get<double>();
    vp.i_0 = j.at("i_0").get<double>();
    vp.gear_ratios = j.at("gear_ratios").get<std::vector<double>>();
    vp.w_e_max = j.at("w_e_max").get<double>();
    vp.track_width = j.at("track_width").get<double>();
    const auto loads = j.at("nominal_loads").get<std::vector<double>>();
    if (loads.size() != 4) throw InputError("vehicle file: nominal_loads must have 4 entries");
    for (int i = 0; i < 4; ++i) vp.nominal_loads[i] = loads[static_cast<size_t>(i)];
  } catch (const json::exception& err) {
    throw InputError("vehicle file '" + path + "': " + err.what());
  }
  vp.validate();
  return vp;
}

void save_vehicle_json(const VehicleParams& vp, const std::string& path) {
  json j;
  j["m"] = vp.m;
  j["m_s"] = vp.m_s;
  j["C_d"] = vp.C_d;
  j["C_r"] = vp.C_r;
  j["h_a"] = vp.h_a;
  j["R_w"] = vp.R_w;
  j["eta_t"] = vp.eta_t;
  j["i_0"] = vp.i_0;
  j["gear_ratios"] = vp.gear_ratios;
  j["w_e_max"] = vp.w_e_max;
  j["track_width"] = vp.track_width;
  j["nominal_loads"] = {vp.nominal_loads[0], vp.nominal_loads[1], vp.nominal_loads[2],
                        vp.nominal_loads[3]};
  j["placeholder"] = true;  // fixture values, not a physical platform
  write_text_atomic(path, j.dump(2) + "\n");
}

void save_gains_json(const LqrGainTable& table, const std::string& path) {
  json j;
  j["velocity_breakpoints"] = table.velocity_breakpoints;
  j["R"] = table.R;
  j["Q"] = json::array();
  for (int r = 0; r < 4; ++r) {
    j["Q"].push_back({table.Q(r, 0), table.Q(r, 1), table.Q(r, 2), table.Q(r, 3)});
  }
  j["intervals"] = json::array();
  for (const LqrInterval& interval : table.intervals) {
    json entry;
    entry["v_low"] = interval.v_low;
    entry["v_high"] = interval.v_high;
    entry["v_rep"] = interval.v_rep;
    entry["K"] = {interval.gain[0], interval.gain[1], interval.gain[2], interval.gain[3]};
    entry["riccati_residual"] = interval.riccati_residual;
    j["intervals"].push_back(std::move(entry));
  }
  write_text_atomic(path, j.dump(2) + "\n");
}

LqrGainTable load_gains_json(const std::string& path) {
  const json j = load_json_file(path);
  LqrGainTable table;
  try {
    table.velocity_breakpoints = j.at("velocity_breakpoints").get<std::vector<double>>();
    table.R = j.at("R").get<double>();
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) table.Q(r, c) = j.at("Q").at(r).at(c).get<double>();
    }
    for (const json& entry : j.at("intervals")) {
      LqrInterval interval;
      interval.v_low = entry.at("v_low").get<double>();
      interval.v_high = entry.at("v_high").get<double>();
      interval.v_rep = entry.at("v_rep").get<double>();
      for (int c = 0; c < 4; ++c) interval.gain[c] = entry.at("K").at(c).get<double>();
      interval.riccati_residual = entry.value("riccati_residual", 0.0);
      table.intervals.push_back(interval);
    }
  } catch (const json::exception& err) {
    throw InputError("gains file '" + path + "': " + err.what());
  }
  if (table.intervals.empty()) throw InputError("gains file '" + path + "': no intervals");
  return table;
}

SyntheticSpec load_synthetic_spec(const std::string& path, std::string* model_name) {
  const json j = load_json_file(path);
  SyntheticSpec spec;
  try {
    const std::string model = j.at("model").get<std::string>();
    if (model_name) *model_name = model;
    const auto gt = j.at("ground_truth").get<std::vector<double>>();
    spec.ground_truth.resize(static_cast<Eigen::Index>(gt.size()));
    for (size_t i = 0; i < gt.size(); ++i) spec.ground_truth[static_cast<Eigen::Index>(i)] = gt[i];
    for (const json& range : j.at("input_range")) {
      spec.input_range.emplace_back(range.at(0).get<double>(), range.at(1).get<double>());
    }
    spec.n_samples = j.at("n_samples").get<std::int64_t>();
    spec.noise_std = j.value("noise_std", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& err) {
    throw InputError("synthetic spec '" + path + "': " + err.what());
  }
  return spec;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  json j;
  j["command"] = manifest.command;
  j["config"] = manifest.config_path;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;
  j["seed"] = manifest.seed;
  j["tool_version"] = manifest.tool_version;
  j["started_at"] = manifest.started_at;
  j["finished_at"] = manifest.finished_at;
  write_text_atomic(path, j.dump(2) + "\n");
}

std::string format_double(double v) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

std::string iso_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace mihpo
