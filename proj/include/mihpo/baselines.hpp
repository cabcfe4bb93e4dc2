#pragma once

#include <cstdint>

#include "mihpo/optimizer.hpp"

namespace mihpo {

/// Gradient descent over the black-box objective with central
/// finite-difference gradients: p <- clamp(p - lr * grad). Each iteration
/// spends exactly 2*n_p + 1 objective calls (probes + the new iterate).
struct GboSettings {
  double learning_rate = 1e-4;
  std::int64_t max_evaluations = 10000;
  double fd_step = 1e-6;  // relative to each parameter's bound range
};

OptimizationReport run_gbo(const ParamSpace& space, const ObjectiveFn& objective,
                           const GboSettings& settings, std::uint64_t seed);

/// Synchronous global-best particle swarm:
///   v <- w*v + c1*r1.*(pbest - x) + c2*r2.*(gbest - x),  x <- clamp(x + v)
/// Inertia/acceleration defaults are the standard constriction values.
struct PsoSettings {
  std::int64_t n_particles = 100;
  double inertia = 0.729;
  double cognitive_coeff = 1.49445;
  double social_coeff = 1.49445;
  std::int64_t max_evaluations = 10000;
  int jobs = 1;
};

OptimizationReport run_pso(const ParamSpace& space, const ObjectiveFn& objective,
                           const PsoSettings& settings, std::uint64_t seed);

}  // namespace mihpo
