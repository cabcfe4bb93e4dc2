#include "mihpo/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mihpo/errors.hpp"
#include "mihpo/io.hpp"
#include "mihpo/models.hpp"
#include "mihpo/rng.hpp"

namespace mihpo {

void Dataset::validate() const {
  if (inputs.rows() != outputs.size()) {
    throw InputError("Dataset '" + name + "': inputs and outputs differ in length");
  }
  if (outputs.size() < 1) throw InputError("Dataset '" + name + "': empty");
  if (!inputs.allFinite() || !outputs.allFinite()) {
    throw InputError("Dataset '" + name + "': non-finite entries");
  }
}

double mse_objective(const ParametricModel& model, const Eigen::VectorXd& params,
                     const Dataset& data) {
  const Eigen::VectorXd predictions = model.predict_batch(data.inputs, params);
  return (data.outputs - predictions).squaredNorm() / static_cast<double>(data.size());
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_field(const std::string& raw, double* out) {
  const char* first = raw.data();
  const char* last = raw.data() + raw.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  const auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last && first != last;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::vector<std::string>& input_columns,
                 const std::string& output_column, std::int64_t* rejected_rows) {
  std::ifstream file(path);
  if (!file) throw InputError("load_csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(file, line)) throw InputError("load_csv: '" + path + "' is empty");
  std::vector<std::string> header = split_line(line);
  for (std::string& h : header) {
    while (!h.empty() && (h.back() == '\r' || h.back() == ' ')) h.pop_back();
  }

  auto column_index = [&](const std::string& col) {
    const auto it = std::find(header.begin(), header.end(), col);
    if (it == header.end()) {
      throw InputError("load_csv: column '" + col + "' not found in '" + path + "'");
    }
    return static_cast<size_t>(it - header.begin());
  };

  std::vector<size_t> in_idx;
  in_idx.reserve(input_columns.size());
  for (const std::string& col : input_columns) in_idx.push_back(column_index(col));
  const size_t out_idx = column_index(output_column);

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> outputs;
  std::int64_t rejected = 0;

  while (std::getline(file, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_line(line);
    Eigen::VectorXd x(static_cast<Eigen::Index>(in_idx.size()));
    double y = 0.0;
    bool ok = fields.size() >= header.size();
    for (size_t c = 0; ok && c < in_idx.size(); ++c) {
      ok = parse_field(fields[in_idx[c]], &x[static_cast<Eigen::Index>(c)]) &&
           std::isfinite(x[static_cast<Eigen::Index>(c)]);
    }
    if (ok) ok = parse_field(fields[out_idx], &y) && std::isfinite(y);
    if (!ok) {
      ++rejected;
      continue;
    }
    rows.push_back(std::move(x));
    outputs.push_back(y);
  }

  if (rejected > 0) {
    std::cerr << "warning: load_csv dropped " << rejected << " row(s) with non-finite or "
              << "malformed fields from '" << path << "'\n";
  }
  if (rejected_rows) *rejected_rows = rejected;
  if (rows.empty()) throw InputError("load_csv: no usable data rows in '" + path + "'");

  Dataset data;
  data.name = path;
  data.inputs.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(in_idx.size()));
  data.outputs.resize(static_cast<Eigen::Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    data.inputs.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    data.outputs[static_cast<Eigen::Index>(i)] = outputs[i];
  }
  return data;
}

void save_csv(const Dataset& data, const std::string& path,
              const std::vector<std::string>& input_columns, const std::string& output_column) {
  if (static_cast<Eigen::Index>(input_columns.size()) != data.input_dim()) {
    throw InputError("save_csv: column names do not match dataset dimension");
  }
  std::ofstream file(path);
  if (!file) throw InputError("save_csv: cannot write '" + path + "'");
  for (const std::string& col : input_columns) file << col << ',';
  file << output_column << '\n';
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index c = 0; c < data.input_dim(); ++c) {
      file << format_double(data.inputs(i, c)) << ',';
    }
    file << format_double(data.outputs[i]) << '\n';
  }
}

void SyntheticSpec::validate() const {
  if (n_samples < 1) throw InputError("SyntheticSpec: n_samples must be >= 1");
  if (noise_std < 0.0) throw InputError("SyntheticSpec: noise_std must be >= 0");
  for (const auto& [lo, hi] : input_range) {
    if (!(lo < hi)) throw InputError("SyntheticSpec: input_range must satisfy min < max");
  }
}

Dataset generate_synthetic(const ParametricModel& model, const SyntheticSpec& spec) {
  spec.validate();
  if (spec.ground_truth.size() != model.param_count()) {
    throw InputError("generate_synthetic: ground_truth dimension does not match model '" +
                     model.name() + "'");
  }
  if (static_cast<Eigen::Index>(spec.input_range.size()) != model.input_dim()) {
    throw InputError("generate_synthetic: input_range dimension does not match model '" +
                     model.name() + "'");
  }

  RngStream rng(spec.seed);
  Dataset data;
  data.name = model.name() + "_synthetic";
  data.inputs.resize(spec.n_samples, model.input_dim());
  data.outputs.resize(spec.n_samples);
  for (Eigen::Index i = 0; i < spec.n_samples; ++i) {
    for (Eigen::Index d = 0; d < model.input_dim(); ++d) {
      const auto& [lo, hi] = spec.input_range[static_cast<size_t>(d)];
      data.inputs(i, d) = rng.uniform(lo, hi);
    }
    const double clean = model.predict(data.inputs.row(i).transpose(), spec.ground_truth);
    data.outputs[i] = clean + spec.noise_std * rng.normal();
  }
  return data;
}

}  // namespace mihpo
