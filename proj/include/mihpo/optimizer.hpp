#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mihpo/param_space.hpp"
#include "mihpo/rng.hpp"
#include "mihpo/schedule.hpp"

namespace mihpo {

/// Black-box objective: maps a parameter vector to a loss (lower is
/// better). Must be deterministic for fixed inputs. Non-finite returns are
/// treated as rejections / +inf by the optimizers.
using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

/// Gaussian mutation noise schedule. sigma is annealed linearly from
/// sigma_max at progress t=0 to sigma_min at t=1.
struct MutationPolicy {
  Eigen::VectorXd sigma_max;
  Eigen::VectorXd sigma_min;

  Eigen::VectorXd sigma_at(double t) const {
    // (1-t)*max + t*min: linear, exact at both endpoints
    return (1.0 - t) * sigma_max + t * sigma_min;
  }

  /// Scale-free default: sigma as a fraction of each parameter's bound
  /// range (0.1 down to 0.001 unless overridden).
  static MutationPolicy from_fractions(const ParamSpace& space,
                                       double sigma_max_frac = 0.1,
                                       double sigma_min_frac = 0.001);

  void validate(Eigen::Index n_params) const;
};

/// (cumulative objective evaluations, best loss seen so far) samples; the
/// best-so-far sequence is non-increasing by construction.
struct LossCurvePoint {
  std::int64_t evaluations = 0;
  double best_loss = 0.0;
};

struct BracketTrace {
  int s = 0;
  double best_loss = 0.0;
};

/// What an optimizer run reports back: the winning configuration, the
/// convergence curve, and resource accounting.
struct OptimizationReport {
  ParamConfig best_config;
  std::vector<LossCurvePoint> loss_curve;
  double wall_time_seconds = 0.0;
  std::int64_t total_evaluations = 0;
  std::vector<BracketTrace> bracket_traces;
  std::string termination = "completed";
};

/// Mutate-and-evaluate loop of the bandit optimizer: spends exactly r_j
/// objective evaluations. Each iteration draws eps ~ N(0, I), proposes
/// p_mut = clamp(p + sigma(t) .* eps) with t = iteration / r_j, and keeps
/// the mutation only if its loss is strictly lower than the current one
/// (non-finite losses are rejected outright). Returns the updated config
/// and its loss; the loss never exceeds the incoming config's loss.
std::pair<ParamConfig, double> eval_with_mutation(ParamConfig config, std::int64_t r_j,
                                                  const ObjectiveFn& objective,
                                                  const MutationPolicy& policy,
                                                  const ParamSpace& space, RngStream& rng);

/// The k configs with the smallest losses, stable under ties (original
/// index order). Configs keep their mutated values and resource accounting
/// so later rungs continue from them.
std::vector<ParamConfig> select_top_k(const std::vector<ParamConfig>& configs,
                                      const std::vector<double>& losses, std::int64_t k);

struct MihpoOptions {
  std::int64_t R = 10000;
  int eta = 5;
  std::uint64_t seed = 0;
  int jobs = 1;  // 1 = deterministic reference mode; >1 parallelizes rung evaluations
  double sigma_max_frac = 0.1;
  double sigma_min_frac = 0.001;
};

/// Run every bracket and rung of the schedule over the given objective.
/// The returned best config carries the globally smallest loss observed
/// across all brackets. Identical results for any jobs setting; one RNG
/// stream per (seed, bracket, rung, config index).
OptimizationReport run_mihpo(const ParamSpace& space, const ObjectiveFn& objective,
                             const MihpoOptions& options);

OptimizationReport run_mihpo(const ParamSpace& space, const ObjectiveFn& objective,
                             const MihpoOptions& options, const MutationPolicy& policy);

}  // namespace mihpo
