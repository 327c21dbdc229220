#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args, const fs::path& dir) {
  args.insert(args.begin(), {"--out", dir.string()});
  std::ostringstream out, err;
  const int code = dirac::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dirac_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("prop32 writes a CSV with measured <= bound") {
  const fs::path dir = scratch("prop32");
  const Run r = run({"--format", "csv", "prop32", "--mu", "1", "--lambda", "0.05", "--t2", "0.03125"}, dir);
  CHECK(r.code == 0);
  std::ifstream csv(dir / "prop32.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "mu,lambda,theta,measured,bound,margin,t_2");
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 7);
    CHECK(v[3] <= v[4]);
    ++rows;
  }
  CHECK(rows == 1);
  const auto j = nlohmann::json::parse(slurp(dir / "prop32.json"));
  CHECK(j["check"] == "prop32");
  CHECK(j["pass"] == true);
  CHECK(j["paper_ref"].get<std::string>().size() > 10);
}

TEST_CASE("glue reports a nonincreasing max-gap sequence") {
  const fs::path dir = scratch("glue");
  const Run r = run({"glue", "--t2", "0.2,0.1,0.05", "--Lambda", "3", "--epsilon", "0.1"}, dir);
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "glue.json"));
  const auto gaps = j["params"]["max_gap_sequence"];
  REQUIRE(gaps.size() == 3);
  const double slack = j["params"]["trend_slack"].get<double>();
  for (std::size_t i = 1; i < gaps.size(); ++i)
    CHECK(gaps[i].get<double>() <= gaps[i - 1].get<double>() + slack);
}

TEST_CASE("usage errors and help") {
  const fs::path dir = scratch("usage");
  CHECK(run({"frobnicate"}, dir).code == dirac::cli::kUsageError);
  CHECK(run({}, dir).code == dirac::cli::kUsageError);
  CHECK(run({"neck", "--n", "2"}, dir).code == dirac::cli::kUsageError);
  CHECK(run({"--format", "xml", "neck"}, dir).code == dirac::cli::kUsageError);
  const Run help = run({"--help"}, dir);
  CHECK(help.code == 0);
  for (const auto& name : dirac::cli::subcommands()) CHECK(help.out.find(name) != std::string::npos);
}

TEST_CASE("hypothesis violations exit with code 3") {
  const fs::path dir = scratch("hyp");
  const Run r = run({"prop33", "--lambda", "10", "--mu", "1"}, dir);
  CHECK(r.code == dirac::cli::kHypothesisViolation);
  const Run c = run({"cor1", "--t2", "0.03125", "--Lambda", "1"}, dir);
  CHECK(c.code == dirac::cli::kHypothesisViolation);
}

TEST_CASE("re-runs are byte-identical, also across worker counts") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  for (const std::string cmd : {"prop31", "neck", "claim"}) {
    CHECK(run({"--format", "csv", "--seed", "9", cmd}, a).code == 0);
    CHECK(run({"--format", "csv", "--seed", "9", "--workers", "3", cmd}, b).code == 0);
    CHECK(slurp(a / (cmd + ".json")) == slurp(b / (cmd + ".json")));
    CHECK(slurp(a / (cmd + ".csv")) == slurp(b / (cmd + ".csv")));
  }
}
