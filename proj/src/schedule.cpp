#include "mihpo/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mihpo {

HyperbandSchedule build_schedule(std::int64_t R, int eta) {
  if (eta < 2) throw std::invalid_argument("build_schedule: eta must be >= 2, got " + std::to_string(eta));
  if (R < eta) {
    throw std::invalid_argument("build_schedule: R must be >= eta, got R=" + std::to_string(R) +
                                ", eta=" + std::to_string(eta));
  }

  // s_max = floor(log_eta(R)), computed with integer powers to dodge
  // floating-point edge cases at exact powers of eta.
  int s_max = 0;
  std::int64_t power = 1;
  while (power <= R / eta) {
    power *= eta;
    ++s_max;
  }

  HyperbandSchedule schedule;
  schedule.R = R;
  schedule.eta = eta;
  schedule.s_max = s_max;
  schedule.B = static_cast<std::int64_t>(s_max + 1) * R;

  for (int s = s_max; s >= 0; --s) {
    Bracket bracket;
    bracket.s = s;

    std::int64_t eta_pow_s = 1;
    for (int i = 0; i < s; ++i) eta_pow_s *= eta;

    const double n_exact =
        static_cast<double>(schedule.B) / static_cast<double>(R) * static_cast<double>(eta_pow_s) /
        static_cast<double>(s + 1);
    bracket.n = static_cast<std::int64_t>(std::ceil(n_exact - 1e-12));
    bracket.r = static_cast<double>(R) / static_cast<double>(eta_pow_s);

    std::int64_t eta_pow_j = 1;
    for (int j = 0; j <= s; ++j) {
      Rung rung;
      rung.n_j = bracket.n / eta_pow_j;  // floor(n * eta^-j)
      // resources are whole iterations: round, never below 1
      const double r_j_exact = bracket.r * static_cast<double>(eta_pow_j);
      rung.r_j = std::max<std::int64_t>(1, std::llround(r_j_exact));
      rung.k_j = rung.n_j / eta;  // floor(n_j / eta)
      bracket.rungs.push_back(rung);
      eta_pow_j *= eta;
    }
    schedule.brackets.push_back(std::move(bracket));
  }
  return schedule;
}

}  // namespace mihpo
