#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kCli = MIHPO_CLI_PATH;
const std::string kData = MIHPO_DATA_DIR;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream file(path);
  std::stringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mihpo_cli_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 64") {
  CHECK(run("definitely-not-a-subcommand") == 64);
  CHECK(run("") == 64);
  CHECK(run("fit") == 64);  // missing required options
}

TEST_CASE("generate then fit produces the full artifact set deterministically") {
  TempDir dir;
  const std::string data = dir / "tire.csv";
  REQUIRE(run("generate --spec " + kData + "/synthetic_tire.json --out " + data + " --n 400") == 0);
  CHECK(fs::exists(data));
  CHECK(fs::exists(data + ".manifest.json"));

  const std::string config = kData + "/optimizer_tire_small.json";
  const std::string fit_args = " fit --config " + config + " --data " + data +
                               " --model tire --seed 11 --out-params " + (dir / "p.json") +
                               " --out-report " + (dir / "r.json") + " --out-curve " +
                               (dir / "c.csv");
  REQUIRE(run(fit_args) == 0);
  CHECK(fs::exists(dir / "p.json"));
  CHECK(fs::exists(dir / "r.json"));
  CHECK(fs::exists(dir / "c.csv"));
  CHECK(fs::exists(dir / "p.json.manifest.json"));

  // byte-identical params and curve on a repeated run with the same seed
  const std::string params_once = slurp(dir / "p.json");
  const std::string curve_once = slurp(dir / "c.csv");
  REQUIRE(run(fit_args) == 0);
  CHECK(slurp(dir / "p.json") == params_once);
  CHECK(slurp(dir / "c.csv") == curve_once);
}

TEST_CASE("missing dataset exits with 2") {
  TempDir dir;
  CHECK(run("fit --config " + kData + "/optimizer_tire_small.json --data " +
            (dir / "nope.csv") + " --out-params " + (dir / "p.json")) == 2);
}

TEST_CASE("compare runs each method at the shared budget") {
  TempDir dir;
  const std::string data = dir / "tire.csv";
  REQUIRE(run("generate --spec " + kData + "/synthetic_tire.json --out " + data + " --n 300") == 0);
  const std::string out = dir / "compare.csv";
  REQUIRE(run("compare --config " + kData + "/compare_tire_small.json --data " + data +
              " --seeds 3 --out " + out) == 0);

  std::ifstream file(out);
  std::string line;
  std::getline(file, line);
  REQUIRE(line == "method,seed,evaluations,best_loss");

  std::map<std::string, std::int64_t> final_evals;  // method:seed -> last count
  std::map<std::string, std::string> methods_seen;
  while (std::getline(file, line)) {
    std::stringstream ss(line);
    std::string method, seed, evals, loss;
    std::getline(ss, method, ',');
    std::getline(ss, seed, ',');
    std::getline(ss, evals, ',');
    std::getline(ss, loss, ',');
    final_evals[method + ":" + seed] = std::stoll(evals);
    methods_seen[method] = seed;
  }
  // 3 methods x 3 seeds = 9 curve groups
  CHECK(final_evals.size() == 9);
  CHECK(methods_seen.size() == 3);

  // equal budgets: every curve ends at most one swarm/iteration short
  std::int64_t budget = 0;
  for (const auto& [key, evals] : final_evals) budget = std::max(budget, evals);
  for (const auto& [key, evals] : final_evals) {
    CHECK(evals <= budget);
    CHECK(evals > budget - 600);  // pso-500 may undershoot by under one sweep
  }
}

TEST_CASE("engine pipeline: fit, map, gains, plan, sim") {
  TempDir dir;
  const std::string engine_data = dir / "engine.csv";
  REQUIRE(run("generate --spec " + kData + "/synthetic_engine.json --out " + engine_data) == 0);
  REQUIRE(run("fit --config " + kData + "/optimizer_engine_small.json --data " + engine_data +
              " --model engine_curve --throttle 15 --out-params " + (dir / "engine15.json") +
              " --out-report " + (dir / "er.json") + " --out-curve " + (dir / "ec.csv")) == 0);

  const std::string map_args = "build-engine-map --fitted " + (dir / "engine15.json") +
                               " --dyno " + kData + "/dyno_sample.csv" + " --out-map " +
                               (dir / "map.csv") + " --out-provenance " + (dir / "prov.csv");
  REQUIRE(run(map_args) == 0);
  CHECK(fs::exists(dir / "map.csv"));
  CHECK(fs::exists(dir / "prov.csv"));

  // tire params for gains and the closed loop
  const std::string tire_data = dir / "tire.csv";
  REQUIRE(run("generate --spec " + kData + "/synthetic_tire.json --out " + tire_data +
              " --n 400") == 0);
  REQUIRE(run("fit --config " + kData + "/optimizer_tire_small.json --data " + tire_data +
              " --seed 3 --out-params " + (dir / "front.json") + " --out-report " +
              (dir / "fr.json") + " --out-curve " + (dir / "fc.csv")) == 0);

  REQUIRE(run("lqr-gains --tire-front " + (dir / "front.json") + " --tire-rear " +
              (dir / "front.json") + " --out " + (dir / "gains.json")) == 0);
  CHECK(fs::exists(dir / "gains.json"));

  SUBCASE("plan output rises monotonically with mu") {
    const std::string plan_lo = dir / "plan_lo.csv";
    const std::string plan_hi = dir / "plan_hi.csv";
    const std::string base = "plan --oval 150,80,2 --tire-front " + (dir / "front.json") +
                             " --tire-rear " + (dir / "front.json") + " --v-cap 60";
    REQUIRE(run(base + " --mu 0.5 --out " + plan_lo) == 0);
    REQUIRE(run(base + " --mu 0.9 --out " + plan_hi) == 0);

    std::ifstream lo(plan_lo), hi(plan_hi);
    std::string line_lo, line_hi;
    std::getline(lo, line_lo);
    std::getline(hi, line_hi);
    bool strict_on_corner = false;
    while (std::getline(lo, line_lo) && std::getline(hi, line_hi)) {
      const auto last_comma_lo = line_lo.rfind(',');
      const auto last_comma_hi = line_hi.rfind(',');
      const double v_lo = std::stod(line_lo.substr(last_comma_lo + 1));
      const double v_hi = std::stod(line_hi.substr(last_comma_hi + 1));
      CHECK(v_hi >= v_lo - 1e-12);
      if (v_hi > v_lo + 1e-9) strict_on_corner = true;
    }
    CHECK(strict_on_corner);
  }

  SUBCASE("closed-loop sim completes and writes a trace") {
    REQUIRE(run("sim --oval 150,80,2 --gains " + (dir / "gains.json") + " --map " +
                (dir / "map.csv") + " --provenance " + (dir / "prov.csv") + " --tire-front " +
                (dir / "front.json") + " --tire-rear " + (dir / "front.json") +
                " --v-cap 30 --laps 1 --out " + (dir / "trace.csv")) == 0);
    CHECK(fs::exists(dir / "trace.csv"));
    std::ifstream trace(dir / "trace.csv");
    std::string header;
    std::getline(trace, header);
    CHECK(header.rfind("t,x,y,psi", 0) == 0);
  }
}

}  // TEST_SUITE
