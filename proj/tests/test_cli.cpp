#include "cli.hpp"
#include "support/synthetic.hpp"

#include <doctest.h>
#include "json.hpp"

#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gna");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = gna::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Fixture {
  fs::path dir = gna::testing::temp_dir("cli");
  fs::path train = dir / "Toy_TRAIN.tsv";
  fs::path test = dir / "Toy_TEST.tsv";
  Fixture() { gna::testing::write_dataset(dir, gna::testing::make_two_class_dataset("Toy", 8, 6, 24, 1)); }
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("build-graphs is byte-identical on rerun") {
  Fixture f;
  const auto a = f.dir / "a", b = f.dir / "b";
  REQUIRE(run_cli({"build-graphs", "--train", f.train, "--test", f.test, "--out", a}).code == 0);
  REQUIRE(run_cli({"build-graphs", "--train", f.train, "--test", f.test, "--out", b}).code == 0);
  for (const char* name : {"Toy_TRAIN.vg", "Toy_TEST.vg", "Toy_manifest.json"}) {
    CHECK(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  CHECK_FALSE(fs::exists(a / ".gna.lock"));
}

TEST_CASE("missing input exits 2 and names the path") {
  Fixture f;
  const auto r = run_cli({"build-graphs", "--train", (f.dir / "nope.tsv").string(), "--test", f.test,
                          "--out", f.dir / "o"});
  CHECK(r.code == 2);
  CHECK(r.err.find("nope.tsv") != std::string::npos);
}

TEST_CASE("malformed input exits 2 with line and column") {
  Fixture f;
  std::ofstream(f.dir / "Bad_TRAIN.tsv") << "1\t0.5\t0.7\n1\tabc\t0.2\n";
  const auto r = run_cli({"build-graphs", "--train", (f.dir / "Bad_TRAIN.tsv").string(), "--test", f.test,
                          "--out", f.dir / "o"});
  CHECK(r.code == 2);
  CHECK(r.err.find("2") != std::string::npos);
}

TEST_CASE("invalid hyperparameters exit 2") {
  Fixture f;
  CHECK(run_cli({"train", "--train", f.train, "--test", f.test, "--out", f.dir / "t", "--nhid", "10"}).code == 2);
  CHECK(run_cli({"train", "--train", f.train, "--test", f.test, "--out", f.dir / "t", "--readout", "max"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
}

TEST_CASE("train then evaluate") {
  Fixture f;
  const auto out = f.dir / "t";
  const auto r = run_cli({"train", "--train", f.train, "--test", f.test, "--out", out, "--nhid", "8",
                          "--epochs", "3", "--batch-size", "4"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(fs::exists(out / "checkpoint.json"));
  CHECK(fs::exists(out / "train_log.json"));
  const auto e = run_cli({"evaluate", "--train", f.train, "--test", f.test, "--checkpoint",
                          (out / "checkpoint.json").string(), "--out", out});
  REQUIRE_MESSAGE(e.code == 0, e.err);
  const auto doc = nlohmann::json::parse(slurp(out / "evaluation.json"));
  CHECK(doc["metrics"]["accuracy"].get<double>() >= 0.0);
  CHECK(fs::exists(out / ".gna-cache"));
}

TEST_CASE("run with five seeds") {
  Fixture f;
  const auto out = f.dir / "r";
  const auto r = run_cli({"run", "--train", f.train, "--test", f.test, "--out", out, "--nhid", "8",
                          "--epochs", "2", "--seeds", "5"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto doc = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(doc["runs"].size() == 5);
  CHECK(r.out.find("±") != std::string::npos);
  CHECK(run_cli({"run", "--train", f.train, "--test", f.test, "--out", out, "--seeds", "x"}).code == 2);
}

TEST_CASE("search writes a log") {
  Fixture f;
  const auto out = f.dir / "s";
  const auto r = run_cli({"search", "--train", f.train, "--test", f.test, "--out", out, "--trials", "1"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto doc = nlohmann::json::parse(slurp(out / "search_log.json"));
  CHECK(doc["trials"].size() == 1);
}

TEST_CASE("degree-dist counts sum to the series length") {
  Fixture f;
  const auto out = f.dir / "d";
  const auto r = run_cli({"degree-dist", "--train", f.train, "--index", "2", "--out", out});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  std::ifstream in(out / "degree_distribution.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "degree,count,log10_degree,log10_count");
  long total = 0;
  while (std::getline(in, line)) total += std::stol(line.substr(line.find(',') + 1));
  CHECK(total == 24);
  CHECK(run_cli({"degree-dist", "--train", f.train, "--index", "99", "--out", out}).code == 2);
}

TEST_CASE("a held lock blocks a second writer") {
  Fixture f;
  const auto out = f.dir / "l";
  fs::create_directories(out);
  std::ofstream(out / ".gna.lock") << "held";
  const auto r = run_cli({"build-graphs", "--train", f.train, "--test", f.test, "--out", out});
  CHECK(r.code != 0);
  CHECK(r.err.find("lock") != std::string::npos);
  CHECK(fs::exists(out / ".gna.lock"));
}

}
