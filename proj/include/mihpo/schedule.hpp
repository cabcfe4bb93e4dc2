#pragma once

#include <cstdint>
#include <vector>

namespace mihpo {

/// One successive-halving round within a bracket: n_j surviving configs,
/// each granted r_j evaluation iterations, of which the best k_j advance.
struct Rung {
  std::int64_t n_j = 0;
  std::int64_t r_j = 0;
  std::int64_t k_j = 0;
};

/// One outer-loop instance: starts with n configs at r iterations each.
/// r may be fractional at the bracket level; per-rung resources are
/// rounded to whole iterations (minimum 1).
struct Bracket {
  int s = 0;
  std::int64_t n = 0;
  double r = 0.0;
  std::vector<Rung> rungs;

  std::int64_t total_evaluations() const {
    std::int64_t total = 0;
    for (const Rung& rung : rungs) total += rung.n_j * rung.r_j;
    return total;
  }
};

/// The full bracket/rung structure derived from (R, eta).
struct HyperbandSchedule {
  std::int64_t R = 0;
  int eta = 0;
  int s_max = 0;
  std::int64_t B = 0;
  std::vector<Bracket> brackets;  // ordered s = s_max down to 0

  std::int64_t total_evaluations() const {
    std::int64_t total = 0;
    for (const Bracket& b : brackets) total += b.total_evaluations();
    return total;
  }
};

/// Build the bracket schedule:
///   s_max = floor(log_eta(R)),  B = (s_max + 1) * R
///   per bracket s: n = ceil((B/R) * eta^s / (s+1)),  r = R * eta^(-s)
///   per rung j:    n_j = floor(n * eta^(-j)),  r_j = round(r * eta^j) >= 1,
///                  k_j = floor(n_j / eta)
/// Throws std::invalid_argument if R < eta or eta < 2.
HyperbandSchedule build_schedule(std::int64_t R, int eta);

}  // namespace mihpo
