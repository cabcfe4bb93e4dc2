#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "mihpo/schedule.hpp"

using namespace mihpo;

TEST_SUITE("schedule") {

TEST_CASE("reference setting R=10000 eta=5") {
  const HyperbandSchedule schedule = build_schedule(10000, 5);
  CHECK(schedule.s_max == 5);
  CHECK(schedule.B == 60000);
  REQUIRE(schedule.brackets.size() == 6);

  const Bracket& first = schedule.brackets[0];
  CHECK(first.s == 5);
  CHECK(first.n == 3125);
  CHECK(first.r == doctest::Approx(3.2));
  REQUIRE(first.rungs.size() == 6);

  // hand-evaluated rung ladder for s = 5
  const std::int64_t expect_n[] = {3125, 625, 125, 25, 5, 1};
  const std::int64_t expect_r[] = {3, 16, 80, 400, 2000, 10000};
  const std::int64_t expect_k[] = {625, 125, 25, 5, 1, 0};
  for (size_t j = 0; j < 6; ++j) {
    CHECK(first.rungs[j].n_j == expect_n[j]);
    CHECK(first.rungs[j].r_j == expect_r[j]);
    CHECK(first.rungs[j].k_j == expect_k[j]);
  }

  const Bracket& last = schedule.brackets[5];
  CHECK(last.s == 0);
  CHECK(last.n == 6);
  REQUIRE(last.rungs.size() == 1);
  CHECK(last.rungs[0].n_j == 6);
  CHECK(last.rungs[0].r_j == 10000);
  CHECK(last.rungs[0].k_j == 1);
}

TEST_CASE("tiny setting R=2 eta=2 hand-evaluated") {
  const HyperbandSchedule schedule = build_schedule(2, 2);
  CHECK(schedule.s_max == 1);
  CHECK(schedule.B == 4);
  REQUIRE(schedule.brackets.size() == 2);

  const Bracket& s1 = schedule.brackets[0];
  CHECK(s1.s == 1);
  CHECK(s1.n == 2);
  CHECK(s1.r == doctest::Approx(1.0));
  REQUIRE(s1.rungs.size() == 2);
  CHECK(s1.rungs[0].n_j == 2);
  CHECK(s1.rungs[0].r_j == 1);
  CHECK(s1.rungs[0].k_j == 1);
  CHECK(s1.rungs[1].n_j == 1);
  CHECK(s1.rungs[1].r_j == 2);
  CHECK(s1.rungs[1].k_j == 0);

  const Bracket& s0 = schedule.brackets[1];
  CHECK(s0.s == 0);
  CHECK(s0.n == 2);
  REQUIRE(s0.rungs.size() == 1);
  CHECK(s0.rungs[0].n_j == 2);
  CHECK(s0.rungs[0].r_j == 2);
  CHECK(s0.rungs[0].k_j == 1);
}

TEST_CASE("schedule identity holds over an (R, eta) grid") {
  const std::int64_t Rs[] = {2, 5, 27, 81, 100, 1000, 9999, 10000, 12345};
  const int etas[] = {2, 3, 4, 5, 7};
  for (std::int64_t R : Rs) {
    for (int eta : etas) {
      if (R < eta) continue;
      CAPTURE(R);
      CAPTURE(eta);
      const HyperbandSchedule schedule = build_schedule(R, eta);

      // s_max = floor(log_eta R): eta^s_max <= R < eta^(s_max+1)
      std::int64_t pow_smax = 1;
      for (int i = 0; i < schedule.s_max; ++i) pow_smax *= eta;
      CHECK(pow_smax <= R);
      CHECK(pow_smax * eta > R);
      CHECK(schedule.B == (schedule.s_max + 1) * R);
      CHECK(static_cast<int>(schedule.brackets.size()) == schedule.s_max + 1);

      for (const Bracket& bracket : schedule.brackets) {
        std::int64_t eta_pow_s = 1;
        for (int i = 0; i < bracket.s; ++i) eta_pow_s *= eta;
        // n = ceil((B/R) * eta^s / (s+1)) with everything integral
        const std::int64_t numerator = (schedule.B / R) * eta_pow_s;
        const std::int64_t expected_n = (numerator + bracket.s) / (bracket.s + 1);
        CHECK(bracket.n == expected_n);
        REQUIRE(static_cast<int>(bracket.rungs.size()) == bracket.s + 1);

        std::int64_t eta_pow_j = 1;
        for (int j = 0; j <= bracket.s; ++j) {
          const Rung& rung = bracket.rungs[static_cast<size_t>(j)];
          CHECK(rung.n_j == bracket.n / eta_pow_j);
          CHECK(rung.k_j == rung.n_j / eta);
          // r_j = round(R * eta^(j-s)), at least 1
          const double r_exact =
              static_cast<double>(R) * static_cast<double>(eta_pow_j) /
              static_cast<double>(eta_pow_s);
          const std::int64_t expected_r = std::max<std::int64_t>(1, std::llround(r_exact));
          CHECK(rung.r_j == expected_r);
          if (j > 0) {
            CHECK(rung.n_j <= bracket.rungs[static_cast<size_t>(j - 1)].n_j);
            CHECK(rung.r_j >= bracket.rungs[static_cast<size_t>(j - 1)].r_j);
          }
          eta_pow_j *= eta;
        }
      }
    }
  }
}

TEST_CASE("rejects bad arguments") {
  CHECK_THROWS_AS(build_schedule(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_schedule(4, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_schedule(100, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_schedule(100, 0), std::invalid_argument);
}

}  // TEST_SUITE
