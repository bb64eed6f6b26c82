// Exercises the installed CLI end to end via subprocesses: schemas,
// exit codes and byte-level determinism of output files.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "nhk_cli_tests";

int run_cli(const std::string& args, const std::string& log_name = "out.log") {
  const std::string cmd = std::string(NHK_CLI_PATH) + " " + args + " > " +
                          (kWork / log_name).string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("generate: schema, determinism, invalid arguments") {
  fs::create_directories(kWork);
  const auto out = kWork / "moons.csv";
  REQUIRE(run_cli("generate --dataset two-moons --n 400 --seed 7 --out " + out.string()) == 0);
  const std::string first = slurp(out);
  CHECK(line_count(first) == 401);  // header + 400 rows
  CHECK(first.rfind("x1,x2,label,true_class\n", 0) == 0);

  REQUIRE(run_cli("generate --dataset two-moons --n 400 --seed 7 --out " + out.string()) == 0);
  CHECK(slurp(out) == first);

  const auto missing = kWork / "never.csv";
  fs::remove(missing);
  CHECK(run_cli("generate --dataset two-moons --n 3 --out " + missing.string()) == 2);
  CHECK(!fs::exists(missing));  // invalid args leave no partial output
}

TEST_CASE("propagate: zero steps echo the labels; metrics drive contiguity") {
  fs::create_directories(kWork);
  const auto spiral = kWork / "spiral.csv";
  REQUIRE(run_cli("generate --dataset spiral --n 300 --turns 3 --out " + spiral.string()) == 0);

  const auto trace0 = kWork / "trace0.csv";
  REQUIRE(run_cli("propagate --data " + spiral.string() +
                  " --clamp 150:1 --steps 0 --out " + trace0.string()) == 0);
  const std::string t0 = slurp(trace0);
  CHECK(line_count(t0) == 301);  // header + one block of 300
  CHECK(t0.find("0,150,1\n") != std::string::npos);

  const auto geo = kWork / "trace_geo.csv";
  REQUIRE(run_cli("propagate --data " + spiral.string() +
                      " --clamp 150:1 --metric geodesic --epsilon 0.002 " +
                      "--steps-per-unit 1 --steps 3 --out " + geo.string(),
                  "geo.log") == 0);
  CHECK(slurp(kWork / "geo.log").find("trace contiguous") != std::string::npos);

  const auto euc = kWork / "trace_euc.csv";
  REQUIRE(run_cli("propagate --data " + spiral.string() +
                      " --clamp 150:1 --metric euclidean --epsilon 0.002 " +
                      "--steps-per-unit 1 --steps 3 --out " + euc.string(),
                  "euc.log") == 0);
  CHECK(slurp(kWork / "euc.log").find("NONCONTIGUOUS") != std::string::npos);

  // deterministic re-run
  const auto geo2 = kWork / "trace_geo2.csv";
  REQUIRE(run_cli("propagate --data " + spiral.string() +
                  " --clamp 150:1 --metric geodesic --epsilon 0.002 " +
                  "--steps-per-unit 1 --steps 3 --out " + geo2.string()) == 0);
  CHECK(slurp(geo) == slurp(geo2));
}

TEST_CASE("train: predictions file, determinism, bad flags") {
  fs::create_directories(kWork);
  const auto data = kWork / "train_moons.csv";
  REQUIRE(run_cli("generate --dataset two-moons --n 200 --seed 3 "
                  "--label-per-class 1 --label-seed 5 --out " + data.string()) == 0);

  const auto pred = kWork / "pred.csv";
  const auto metrics = kWork / "metrics.json";
  const std::string train_cmd =
      "train --data " + data.string() +
      " --model nhkrls --gamma-a 0.00025 --gamma-i 0.925 --steps 1 --knn 5 "
      "--tau 0.002 --steps-per-unit 500 --out " + pred.string() +
      " --metrics-out " + metrics.string();
  REQUIRE(run_cli(train_cmd) == 0);
  const std::string p1 = slurp(pred);
  CHECK(line_count(p1) == 201);
  CHECK(p1.rfind("index,score,sign\n", 0) == 0);
  const std::string m1 = slurp(metrics);
  CHECK(m1.find("\"train_error\"") != std::string::npos);

  REQUIRE(run_cli(train_cmd) == 0);
  CHECK(slurp(pred) == p1);
  CHECK(slurp(metrics) == m1);

  CHECK(run_cli("train --data " + data.string() + " --model bogus --out " +
                pred.string()) == 2);
  CHECK(run_cli("train --data " + data.string() + " --model ls --tau 2.0 --out " +
                pred.string()) == 2);
  CHECK(run_cli("train --data /nonexistent.csv --model ls --out " + pred.string()) == 1);
}

TEST_CASE("sweep: schema and determinism on a toy set") {
  fs::create_directories(kWork);
  const auto train = kWork / "sw_train.csv";
  const auto test = kWork / "sw_test.csv";
  REQUIRE(run_cli("generate --dataset two-clusters --n 60 --noise 0.4 --seed 1 --out " +
                  train.string()) == 0);
  REQUIRE(run_cli("generate --dataset two-clusters --n 40 --noise 0.4 --seed 2 --out " +
                  test.string()) == 0);

  const auto out = kWork / "sweep.csv";
  const auto json = kWork / "sweep.json";
  const std::string cmd = "sweep --data " + train.string() + " --test " + test.string() +
                          " --models ls,laprls --counts 2,4,8 --trials 1 --knn 4 "
                          "--seed 5 --out " + out.string() + " --json-out " + json.string();
  REQUIRE(run_cli(cmd) == 0);
  const std::string s1 = slurp(out);
  CHECK(line_count(s1) == 7);  // header + 3 counts x 2 models
  CHECK(s1.rfind("model,count,trial,error,seconds\n", 0) == 0);

  REQUIRE(run_cli(cmd) == 0);
  CHECK(slurp(out) == s1);  // seconds column is zeroed without --timing
  CHECK(!slurp(json).empty());
}

TEST_CASE("boundary: sample count and determinism") {
  fs::create_directories(kWork);
  const auto data = kWork / "b_moons.csv";
  REQUIRE(run_cli("generate --dataset two-moons --n 100 --seed 3 "
                  "--label-per-class 2 --out " + data.string()) == 0);
  const auto out = kWork / "boundary.csv";
  const std::string cmd = "boundary --data " + data.string() +
                          " --model ls --samples 600 --seed 4 --out " + out.string();
  REQUIRE(run_cli(cmd) == 0);
  const std::string b1 = slurp(out);
  CHECK(line_count(b1) == 601);
  CHECK(b1.rfind("x,y,sign\n", 0) == 0);
  REQUIRE(run_cli(cmd) == 0);
  CHECK(slurp(out) == b1);
}
