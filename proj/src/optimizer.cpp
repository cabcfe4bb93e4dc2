#include "mihpo/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mihpo/parallel.hpp"

namespace mihpo {

MutationPolicy MutationPolicy::from_fractions(const ParamSpace& space, double sigma_max_frac,
                                              double sigma_min_frac) {
  if (!(sigma_max_frac > 0.0) || !(sigma_min_frac > 0.0) || sigma_min_frac > sigma_max_frac) {
    throw std::invalid_argument("MutationPolicy: need 0 < sigma_min_frac <= sigma_max_frac");
  }
  MutationPolicy policy;
  policy.sigma_max = sigma_max_frac * space.ranges();
  policy.sigma_min = sigma_min_frac * space.ranges();
  return policy;
}

void MutationPolicy::validate(Eigen::Index n_params) const {
  if (sigma_max.size() != n_params || sigma_min.size() != n_params) {
    throw std::invalid_argument("MutationPolicy: sigma dimension mismatch");
  }
  for (Eigen::Index i = 0; i < n_params; ++i) {
    if (!(sigma_min[i] >= 0.0) || !(sigma_max[i] >= sigma_min[i])) {
      throw std::invalid_argument("MutationPolicy: need 0 <= sigma_min <= sigma_max per parameter");
    }
  }
}

std::pair<ParamConfig, double> eval_with_mutation(ParamConfig config, std::int64_t r_j,
                                                  const ObjectiveFn& objective,
                                                  const MutationPolicy& policy,
                                                  const ParamSpace& space, RngStream& rng) {
  if (r_j < 1) throw std::invalid_argument("eval_with_mutation: r_j must be >= 1");
  policy.validate(space.size());

  const Eigen::Index n = config.values.size();
  double best_loss = config.loss_or_inf();
  Eigen::VectorXd mutated(n);

  for (std::int64_t iter = 0; iter < r_j; ++iter) {
    const double t = static_cast<double>(iter) / static_cast<double>(r_j);
    const Eigen::VectorXd sigma = policy.sigma_at(t);
    for (Eigen::Index d = 0; d < n; ++d) {
      mutated[d] = config.values[d] + sigma[d] * rng.normal();
    }
    space.clamp(mutated);
    const double loss = objective(mutated);
    ++config.resource_spent;
    // hill-climbing acceptance: strictly better and finite
    if (std::isfinite(loss) && loss < best_loss) {
      best_loss = loss;
      config.values = mutated;
    }
  }

  if (std::isfinite(best_loss)) config.loss = best_loss;
  return {std::move(config), best_loss};
}

std::vector<ParamConfig> select_top_k(const std::vector<ParamConfig>& configs,
                                      const std::vector<double>& losses, std::int64_t k) {
  if (configs.size() != losses.size()) {
    throw std::invalid_argument("select_top_k: configs and losses differ in length");
  }
  if (k < 0 || static_cast<size_t>(k) > configs.size()) {
    throw std::invalid_argument("select_top_k: k out of range");
  }
  std::vector<size_t> order(configs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  // non-finite losses rank last; ties keep original order
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double la = std::isfinite(losses[a]) ? losses[a] : std::numeric_limits<double>::infinity();
    const double lb = std::isfinite(losses[b]) ? losses[b] : std::numeric_limits<double>::infinity();
    return la < lb;
  });
  std::vector<ParamConfig> selected;
  selected.reserve(static_cast<size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) selected.push_back(configs[order[static_cast<size_t>(i)]]);
  return selected;
}

OptimizationReport run_mihpo(const ParamSpace& space, const ObjectiveFn& objective,
                             const MihpoOptions& options) {
  return run_mihpo(space, objective, options,
                   MutationPolicy::from_fractions(space, options.sigma_max_frac,
                                                  options.sigma_min_frac));
}

OptimizationReport run_mihpo(const ParamSpace& space, const ObjectiveFn& objective,
                             const MihpoOptions& options, const MutationPolicy& policy) {
  const auto t_start = std::chrono::steady_clock::now();
  const HyperbandSchedule schedule = build_schedule(options.R, options.eta);
  policy.validate(space.size());

  OptimizationReport report;
  double global_best = std::numeric_limits<double>::infinity();
  std::int64_t evaluations = 0;

  for (size_t b = 0; b < schedule.brackets.size(); ++b) {
    const Bracket& bracket = schedule.brackets[b];
    std::vector<ParamConfig> population =
        sample_configs(space, bracket.n, derive_seed(options.seed, b, 0xFFFFFFFFULL));
    double bracket_best = std::numeric_limits<double>::infinity();

    for (size_t j = 0; j < bracket.rungs.size(); ++j) {
      const Rung& rung = bracket.rungs[j];
      const std::int64_t n_alive = static_cast<std::int64_t>(population.size());
      // the selection identity floor(floor(n*eta^-j)/eta) = floor(n*eta^-(j+1))
      // keeps the survivor count equal to the schedule's n_j
      std::vector<double> losses(static_cast<size_t>(n_alive), 0.0);
      std::vector<ParamConfig> evaluated(static_cast<size_t>(n_alive));

      parallel_for(n_alive, options.jobs, [&](std::int64_t i) {
        RngStream rng(derive_seed(options.seed, b, j, static_cast<std::uint64_t>(i)));
        auto [cfg, loss] = eval_with_mutation(std::move(population[static_cast<size_t>(i)]),
                                              rung.r_j, objective, policy, space, rng);
        evaluated[static_cast<size_t>(i)] = std::move(cfg);
        losses[static_cast<size_t>(i)] = loss;
      });

      // serial reduction in index order keeps the curve identical for any
      // jobs setting
      for (std::int64_t i = 0; i < n_alive; ++i) {
        evaluations += rung.r_j;
        const double loss = losses[static_cast<size_t>(i)];
        if (loss < bracket_best) bracket_best = loss;
        if (loss < global_best) {
          global_best = loss;
          report.best_config = evaluated[static_cast<size_t>(i)];
          report.loss_curve.push_back({evaluations, loss});
        }
      }

      population = select_top_k(evaluated, losses, rung.k_j);
    }
    report.bracket_traces.push_back({bracket.s, bracket_best});
  }

  report.total_evaluations = evaluations;
  if (report.loss_curve.empty() || report.loss_curve.back().evaluations != evaluations) {
    report.loss_curve.push_back({evaluations, global_best});
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

}  // namespace mihpo
