#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "arlgm/io.hpp"

using namespace arlgm;
namespace fs = std::filesystem;

namespace {

const std::string kCli = ARLGM_CLI_PATH;

struct TempDir {
  fs::path dir;
  TempDir() : dir(fs::temp_directory_path() / "arlgm_cli_test") {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const {
    return (dir / name).string();
  }
};

int run(const std::string& args) {
  std::string cmd = kCli + " " + args + " >/dev/null 2>/dev/null";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("cli maps each failure class to its exit code") {
  TempDir tmp;
  CHECK(run("--help") == 0);
  CHECK(run("") == 1);                              // missing subcommand
  CHECK(run("identify --no-such-flag") == 1);       // parse error
  CHECK(run("identify --out-prefix " + (tmp / "x")) == 1);  // missing --data
  CHECK(run("identify --data " + (tmp / "absent.csv") + " --out-prefix " +
            (tmp / "x")) == 3);

  std::ofstream(tmp / "text.csv") << "a,b\n1,2\n3,oops\n";
  CHECK(run("identify --data " + (tmp / "text.csv") + " --out-prefix " +
            (tmp / "x")) == 3);

  std::ofstream(tmp / "prices.csv") << "p,q\n1.0,2.0\n0.0,2.1\n1.1,2.2\n";
  CHECK(run("identify --returns --data " + (tmp / "prices.csv") +
            " --out-prefix " + (tmp / "x")) == 1);

  // Too little data for a positive definite lag estimate.
  std::ofstream(tmp / "short.csv") << "a,b,c\n1,2,3\n2,1,0\n0,1,2\n";
  CHECK(run("identify --data " + (tmp / "short.csv") + " --out-prefix " +
            (tmp / "x")) == 1);
}

TEST_CASE("cli simulate writes reproducible model and data files") {
  TempDir tmp;
  std::string base = "simulate --m 3 --l 1 --n 1 --samples 120 --seed 9 ";
  CHECK(run(base + "--out-model " + (tmp / "m1.json") + " --out-data " +
            (tmp / "d1.csv")) == 0);
  CHECK(run(base + "--out-model " + (tmp / "m2.json") + " --out-data " +
            (tmp / "d2.csv")) == 0);
  CHECK(slurp(tmp / "m1.json") == slurp(tmp / "m2.json"));
  CHECK(slurp(tmp / "d1.csv") == slurp(tmp / "d2.csv"));

  std::uint64_t seed = 0;
  LatentArModel model = read_true_model(tmp / "m1.json", &seed);
  CHECK(seed == 9);
  CHECK(model.m == 3);
  CHECK(model.l == 1);
  Table data = read_csv(tmp / "d1.csv");
  CHECK(data.data.rows() == 120);
  CHECK(data.data.cols() == 3);

  CHECK(run("simulate --m 0 --out-model " + (tmp / "z.json") +
            " --out-data " + (tmp / "z.csv")) == 1);  // rejected by the parser
  CHECK(run("simulate --edge-density 1.5 --out-model " + (tmp / "z.json") +
            " --out-data " + (tmp / "z.csv")) == 1);
}

TEST_CASE("cli identify emits the full report set deterministically") {
  TempDir tmp;
  REQUIRE(run("simulate --m 3 --l 0 --n 1 --samples 400 --seed 5 "
              "--edge-density 0.5 --out-model " +
              (tmp / "true.json") + " --out-data " + (tmp / "data.csv")) == 0);
  std::string args = "identify --data " + (tmp / "data.csv") +
                     " --grid-size 256 --lambdas 2.0 --gammas 0.5 --truth " +
                     (tmp / "true.json");
  REQUIRE(run(args + " --out-prefix " + (tmp / "a")) == 0);
  for (const char* suffix :
       {"a.sweep.json", "a.model.json", "a.graph.dot", "a.coherence.csv",
        "a.coherence_mean.csv", "a.errors.csv"}) {
    CHECK(fs::exists(tmp / suffix));
  }

  // Bit-identical outputs on replay.
  REQUIRE(run(args + " --out-prefix " + (tmp / "b")) == 0);
  CHECK(slurp(tmp / "a.sweep.json") == slurp(tmp / "b.sweep.json"));
  CHECK(slurp(tmp / "a.model.json") == slurp(tmp / "b.model.json"));
  CHECK(slurp(tmp / "a.coherence.csv") == slurp(tmp / "b.coherence.csv"));
  CHECK(slurp(tmp / "a.errors.csv") == slurp(tmp / "b.errors.csv"));

  nlohmann::json sweep = parse_file(tmp / "a.sweep.json");
  CHECK(sweep.at("kind") == "sweep_report");
  CHECK(sweep.at("points").size() == 1);
  CHECK(sweep.at("selected") == 0);

  ScoredModel fit = read_identified_model(tmp / "a.model.json");
  CHECK(fit.ok);
  CHECK(fit.reg.lambda == 2.0);

  // Error curves exist only when the truth is given.
  Table errs = read_csv(tmp / "a.errors.csv");
  CHECK(errs.names.front() == "theta");
  CHECK(errs.data.rows() == 256);
  REQUIRE(run("identify --data " + (tmp / "data.csv") +
              " --grid-size 128 --lambdas 2.0 --gammas 0.5 --out-prefix " +
              (tmp / "c")) == 0);
  CHECK_FALSE(fs::exists(tmp / "c.errors.csv"));

  // The manifest graph labels come from the CSV header.
  std::string dot = slurp(tmp / "a.graph.dot");
  CHECK(dot.find("\"x0\"") != std::string::npos);

  // A truth of the wrong dimension is a configuration error.
  REQUIRE(run("simulate --m 2 --l 0 --n 1 --samples 50 --seed 5 "
              "--out-model " +
              (tmp / "true2.json") + " --out-data " + (tmp / "junk.csv")) ==
          0);
  CHECK(run("identify --data " + (tmp / "data.csv") + " --lambdas 2.0 " +
            "--gammas 0.5 --truth " + (tmp / "true2.json") +
            " --out-prefix " + (tmp / "z")) == 1);
}

TEST_CASE("cli score reproduces the sweep-recorded score") {
  TempDir tmp;
  REQUIRE(run("simulate --m 3 --l 1 --n 1 --samples 500 --seed 13 "
              "--out-model " +
              (tmp / "true.json") + " --out-data " + (tmp / "data.csv")) == 0);
  REQUIRE(run("identify --data " + (tmp / "data.csv") +
              " --grid-size 256 --lambdas 1.0,3.0 --gammas 0.6 "
              "--out-prefix " +
              (tmp / "run")) == 0);
  nlohmann::json sweep = parse_file(tmp / "run.sweep.json");
  const auto& best = sweep.at("selected_point");
  REQUIRE(run("score --model " + (tmp / "run.model.json") + " --data " +
              (tmp / "data.csv") + " --grid-size 256 --out " +
              (tmp / "rescore.json")) == 0);
  nlohmann::json rescore = parse_file(tmp / "rescore.json");
  REQUIRE(rescore.at("points").size() == 1);
  CHECK(rescore.at("points").at(0).at("f") == best.at("f"));
  CHECK(rescore.at("points").at(0).at("l") == best.at("l"));
  CHECK(rescore.at("selected") == 0);

  // Model/data dimension mismatch is a configuration error.
  REQUIRE(run("simulate --m 2 --l 0 --n 1 --samples 100 --seed 1 "
              "--out-model " +
              (tmp / "t2.json") + " --out-data " + (tmp / "d2.csv")) == 0);
  CHECK(run("score --model " + (tmp / "run.model.json") + " --data " +
            (tmp / "d2.csv")) == 1);
}

TEST_CASE("cli no-latent flag pins the latent count to zero") {
  TempDir tmp;
  REQUIRE(run("simulate --m 4 --l 1 --n 1 --samples 600 --seed 23 "
              "--out-model " +
              (tmp / "true.json") + " --out-data " + (tmp / "data.csv")) == 0);
  REQUIRE(run("identify --data " + (tmp / "data.csv") +
              " --grid-size 128 --lambdas 0.8 --gammas 0.7 --no-latent "
              "--out-prefix " +
              (tmp / "flat")) == 0);
  ScoredModel fit = read_identified_model(tmp / "flat.model.json");
  CHECK(fit.ok);
  CHECK(fit.model.l == 0);
  std::string dot = slurp(tmp / "flat.graph.dot");
  CHECK(dot.find("style=dashed") == std::string::npos);
}
