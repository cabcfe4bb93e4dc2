#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mihpo {

class ParametricModel;

/// Immutable sample set for the MSE objective: one input row and one
/// scalar output per sample. Safe to share across concurrent evaluations.
struct Dataset {
  Eigen::MatrixXd inputs;   // n_samples x input_dim
  Eigen::VectorXd outputs;  // n_samples
  std::string name;

  Eigen::Index size() const { return outputs.size(); }
  Eigen::Index input_dim() const { return inputs.cols(); }

  void validate() const;  // throws InputError on size mismatch / non-finite entries
};

/// Mean squared error of the model's predictions against the dataset
/// outputs. Non-finite predictions propagate to a non-finite loss, which
/// the optimizers treat as +inf.
double mse_objective(const ParametricModel& model, const Eigen::VectorXd& params,
                     const Dataset& data);

/// Load a comma-separated file with a header row. Rows containing
/// non-finite or unparseable fields are dropped; the count of dropped rows
/// is reported through `rejected_rows` (and a stderr warning) rather than
/// failing the load. Throws InputError for a missing file, missing column,
/// or an empty result.
Dataset load_csv(const std::string& path, const std::vector<std::string>& input_columns,
                 const std::string& output_column, std::int64_t* rejected_rows = nullptr);

void save_csv(const Dataset& data, const std::string& path,
              const std::vector<std::string>& input_columns, const std::string& output_column);

/// Recipe for a synthetic dataset: inputs drawn uniformly from per-
/// dimension ranges, outputs from a ground-truth parameter vector plus
/// Gaussian observation noise.
struct SyntheticSpec {
  Eigen::VectorXd ground_truth;
  std::vector<std::pair<double, double>> input_range;  // per input dimension
  std::int64_t n_samples = 1;
  double noise_std = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Deterministic per seed: the output is a pure function of (model, spec).
Dataset generate_synthetic(const ParametricModel& model, const SyntheticSpec& spec);

}  // namespace mihpo
