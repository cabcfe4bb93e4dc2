#include "mihpo/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "mihpo/parallel.hpp"

namespace mihpo {

OptimizationReport run_gbo(const ParamSpace& space, const ObjectiveFn& objective,
                           const GboSettings& settings, std::uint64_t seed) {
  if (!(settings.learning_rate >= 0.0)) {
    throw std::invalid_argument("run_gbo: learning_rate must be >= 0");
  }
  if (!(settings.fd_step > 0.0)) throw std::invalid_argument("run_gbo: fd_step must be positive");
  if (settings.max_evaluations < 1) {
    throw std::invalid_argument("run_gbo: max_evaluations must be >= 1");
  }

  const auto t_start = std::chrono::steady_clock::now();
  const Eigen::Index n = space.size();
  const Eigen::VectorXd step = settings.fd_step * space.ranges();

  OptimizationReport report;
  Eigen::VectorXd p = sample_configs(space, 1, seed)[0].values;
  std::int64_t evaluations = 0;

  double loss = objective(p);
  ++evaluations;
  double best = std::isfinite(loss) ? loss : std::numeric_limits<double>::infinity();
  report.best_config.values = p;
  if (std::isfinite(best)) report.best_config.loss = best;
  report.loss_curve.push_back({evaluations, best});

  const double initial = best;
  const double blowup = std::max(1e12, 1e9 * (std::isfinite(initial) ? initial + 1.0 : 1.0));
  const std::int64_t per_iteration = 2 * static_cast<std::int64_t>(n) + 1;

  while (evaluations + per_iteration <= settings.max_evaluations) {
    // central differences; probes are not clamped (the step is tiny and
    // the model objectives are defined beyond the bounds)
    Eigen::VectorXd gradient(n);
    for (Eigen::Index d = 0; d < n; ++d) {
      Eigen::VectorXd probe = p;
      probe[d] = p[d] + step[d];
      const double plus = objective(probe);
      probe[d] = p[d] - step[d];
      const double minus = objective(probe);
      gradient[d] = (plus - minus) / (2.0 * step[d]);
    }
    evaluations += 2 * static_cast<std::int64_t>(n);

    if (!gradient.allFinite()) {
      std::cerr << "run_gbo: non-finite gradient after " << evaluations
                << " evaluations, stopping\n";
      report.termination = "non-finite gradient";
      break;
    }

    p -= settings.learning_rate * gradient;
    space.clamp(p);
    loss = objective(p);
    ++evaluations;

    if (std::isfinite(loss) && loss < best) {
      best = loss;
      report.best_config.values = p;
      report.best_config.loss = best;
      report.loss_curve.push_back({evaluations, best});
    }
    if (!std::isfinite(loss) || loss > blowup) {
      std::cerr << "run_gbo: divergence detected (loss "
                << (std::isfinite(loss) ? std::to_string(loss) : "non-finite") << ") after "
                << evaluations << " evaluations, stopping\n";
      report.termination = "diverged";
      break;
    }
  }

  report.total_evaluations = evaluations;
  report.best_config.resource_spent = evaluations;
  if (report.loss_curve.back().evaluations != evaluations) {
    report.loss_curve.push_back({evaluations, best});
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

OptimizationReport run_pso(const ParamSpace& space, const ObjectiveFn& objective,
                           const PsoSettings& settings, std::uint64_t seed) {
  if (settings.n_particles < 2) throw std::invalid_argument("run_pso: need at least 2 particles");
  if (settings.max_evaluations < settings.n_particles) {
    throw std::invalid_argument("run_pso: max_evaluations below one swarm evaluation");
  }

  const auto t_start = std::chrono::steady_clock::now();
  const Eigen::Index dim = space.size();
  const std::int64_t n = settings.n_particles;
  const Eigen::VectorXd lower = space.lower_bounds();
  const Eigen::VectorXd upper = space.upper_bounds();

  std::vector<RngStream> streams;
  streams.reserve(static_cast<size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    streams.emplace_back(derive_seed(seed, static_cast<std::uint64_t>(i)));
  }

  // swarm state
  std::vector<Eigen::VectorXd> position(static_cast<size_t>(n));
  std::vector<Eigen::VectorXd> velocity(static_cast<size_t>(n), Eigen::VectorXd::Zero(dim));
  std::vector<Eigen::VectorXd> personal_best(static_cast<size_t>(n));
  std::vector<double> personal_best_loss(static_cast<size_t>(n),
                                         std::numeric_limits<double>::infinity());
  std::vector<double> losses(static_cast<size_t>(n), 0.0);

  for (std::int64_t i = 0; i < n; ++i) {
    Eigen::VectorXd x(dim);
    for (Eigen::Index d = 0; d < dim; ++d) {
      const ParamSpec& spec = space.spec(d);
      x[d] = spec.mean + spec.std_dev * streams[static_cast<size_t>(i)].normal();
    }
    space.clamp(x);
    position[static_cast<size_t>(i)] = std::move(x);
    personal_best[static_cast<size_t>(i)] = position[static_cast<size_t>(i)];
  }

  OptimizationReport report;
  double global_best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd global_best_pos = position[0];
  std::int64_t evaluations = 0;

  auto evaluate_swarm = [&]() {
    parallel_for(n, settings.jobs, [&](std::int64_t i) {
      losses[static_cast<size_t>(i)] = objective(position[static_cast<size_t>(i)]);
    });
    evaluations += n;
    for (std::int64_t i = 0; i < n; ++i) {
      const double loss = losses[static_cast<size_t>(i)];
      if (std::isfinite(loss) && loss < personal_best_loss[static_cast<size_t>(i)]) {
        personal_best_loss[static_cast<size_t>(i)] = loss;
        personal_best[static_cast<size_t>(i)] = position[static_cast<size_t>(i)];
      }
      if (std::isfinite(loss) && loss < global_best) {
        global_best = loss;
        global_best_pos = position[static_cast<size_t>(i)];
        report.loss_curve.push_back({evaluations, global_best});
      }
    }
  };

  evaluate_swarm();

  while (evaluations + n <= settings.max_evaluations) {
    for (std::int64_t i = 0; i < n; ++i) {
      RngStream& rng = streams[static_cast<size_t>(i)];
      Eigen::VectorXd& x = position[static_cast<size_t>(i)];
      Eigen::VectorXd& v = velocity[static_cast<size_t>(i)];
      for (Eigen::Index d = 0; d < dim; ++d) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        v[d] = settings.inertia * v[d] +
               settings.cognitive_coeff * r1 * (personal_best[static_cast<size_t>(i)][d] - x[d]) +
               settings.social_coeff * r2 * (global_best_pos[d] - x[d]);
        x[d] = std::clamp(x[d] + v[d], lower[d], upper[d]);
      }
    }
    evaluate_swarm();
  }

  report.total_evaluations = evaluations;
  report.best_config.values = global_best_pos;
  if (std::isfinite(global_best)) report.best_config.loss = global_best;
  report.best_config.resource_spent = evaluations;
  if (report.loss_curve.empty() || report.loss_curve.back().evaluations != evaluations) {
    report.loss_curve.push_back({evaluations, global_best});
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

}  // namespace mihpo
