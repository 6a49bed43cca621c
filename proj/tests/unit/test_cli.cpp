#include "sfpde/cli.hpp"
#include "sfpde/json_io.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

using namespace sfpde;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string problem(const std::string& name) { return std::string(SFPDE_PROBLEMS_DIR) + "/" + name + ".json"; }

std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("classify") {
  const Run g2 = run({"classify", problem("g2")});
  REQUIRE(g2.code == 0);
  CHECK(Json::parse(g2.out)["case"] == 1);
  const Run g6 = run({"classify", problem("g6")});
  REQUIRE(g6.code == 0);
  const Json j = Json::parse(g6.out);
  CHECK(j["case"] == 2);
  CHECK(j["p"] == 0);
  CHECK(run({"classify", problem("malformed")}).code == kExitUsage);
  CHECK(run({"classify", problem("unknown_key")}).code == kExitUsage);
  CHECK(run({"classify", problem("indeterminate")}).code == kExitIndeterminate);
  CHECK(run({"classify", "/nonexistent.json"}).code == kExitUsage);
}

TEST_CASE("solve") {
  const Run g11 = run({"solve", problem("g11")});
  REQUIRE(g11.code == 0);
  const Json j = Json::parse(g11.out);
  CHECK(j["schema"] == "series-v1");
  const auto& c = j["coeffs"];
  CHECK(c[0][0].get<double>() == 0.5);
  for (std::size_t k = 1; k < c.size(); ++k) {
    CHECK(std::abs(c[k][0].get<double>()) < 1e-12);
    CHECK(std::abs(c[k][1].get<double>()) < 1e-12);
  }
  CHECK(j["residual"].get<double>() < 1e-12);

  const Run res = run({"solve", problem("g4_linear"), "--order", "4", "4"});
  REQUIRE(res.code == kExitResonance);
  std::set<std::pair<int, int>> got;
  const Json log = Json::parse(res.out);
  for (const auto& r : log["resonances"]) got.insert({r["i"].get<int>(), r["j"].get<int>()});
  CHECK(got == std::set<std::pair<int, int>>{{2, 0}, {1, 1}});

  const Run g2 = run({"solve", problem("g2")});
  REQUIRE(g2.code == 0);
  const Json zero = Json::parse(g2.out);
  for (const auto& z : zero["coeffs"]) {
    CHECK(z[0].get<double>() == 0.0);
    CHECK(z[1].get<double>() == 0.0);
  }
  CHECK(run({"solve", problem("g2"), "--order", "4"}).code == kExitUsage);
}

TEST_CASE("trace") {
  {
    const Run r = run({"trace", problem("zero_drift"), "--xi", "0.02,0.01", "--tmin", "1e-6"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() > 2);
    for (const auto& row : rows) {
      CHECK(row[1] == 0.02);
      CHECK(row[2] == 0.01);
    }
    CHECK(Json::parse(r.err)["trace"]["status"] == "reached_tmin");
  }
  {
    const std::string csv = "cli_case3_trace.csv";
    const Run r = run({"trace", problem("case3_trace"), "--xi", "0.1", "--t0", "0.1", "--tmin", "1e-6", "--csv", csv});
    REQUIRE(r.code == 0);
    const Json rep = Json::parse(r.out);
    CHECK(rep["trace"]["status"] == "reached_tmin");
    CHECK(rep["reconstruct"]["max_rel_dev"].get<double>() < 1e-6);
    CHECK(rep["phi"]["pass"] == true);
    std::ifstream in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto rows = parse_csv(ss.str());
    REQUIRE(rows.size() > 2);
    CHECK(rows.back()[0] == 1e-6);
    for (const auto& row : rows) {
      const double exact = 0.1 / (1.0 + 0.1 * std::log(0.1 / row[0]));
      CHECK(std::abs(row[1] - exact) / exact < 1e-6);
    }
    std::remove(csv.c_str());
  }
  {
    const Run r = run({"trace", problem("exit_domain"), "--xi", "0.3", "--t0", "0.1"});
    REQUIRE(r.code == 0);
    const Json rep = Json::parse(r.err);
    CHECK(rep["trace"]["status"] == "exited_domain");
    REQUIRE(rep["trace"].contains("exit_t"));
    CHECK(std::abs(rep["trace"]["exit_t"].get<double>() - 0.03) < 1e-9);
    const auto& ex = rep["trace"]["exit_x"];
    CHECK(std::abs(std::hypot(ex[0].get<double>(), ex[1].get<double>()) - 1.0) < 1e-9);
  }
  {
    const Run r = run({"trace", problem("g2"), "--solution", "quarter", "--xi", "0.02", "--csv", "cli_q.csv"});
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["decay"]["pass"] == true);
    std::remove("cli_q.csv");
  }
  CHECK(run({"trace", problem("g6")}).code == kExitUsage);
  CHECK(run({"trace", problem("zero_drift"), "--xi", "abc"}).code == kExitUsage);
}

TEST_CASE("audit exit codes") {
  const Run quarter = run({"audit", problem("g2"), "--solution", "quarter"});
  CHECK(quarter.code == kExitCriterionFails);
  CHECK(std::abs(Json::parse(quarter.out)["estimate"].get<double>() - 0.25) <= 0.005);
  CHECK(run({"audit", problem("g2"), "--solution", "zero"}).code == kExitOk);
  CHECK(run({"audit", problem("g4"), "--solution", "family"}).code == kExitHypothesesFail);
  CHECK(run({"audit", problem("g10"), "--solution", "zero"}).code == kExitOk);
  CHECK(run({"audit", problem("g10"), "--solution", "x_over_t"}).code == kExitCriterionFails);
  CHECK(run({"audit", problem("g2"), "--solution", "nope"}).code == kExitUsage);
}

TEST_CASE("gallery subcommand") {
  const Run all = run({"gallery", "--all"});
  CHECK(all.code == 0);
  CHECK(all.out.find("11/11 pass") != std::string::npos);
  CHECK(run({"gallery", "G99"}).code == kExitUsage);
  const Run g10 = run({"gallery", "G10", "--json"});
  REQUIRE(g10.code == 0);
  CHECK(g10.out.find("case 3") != std::string::npos);
  const Run cat = run({"gallery", "--export"});
  CHECK(Json::parse(cat.out)["entries"].size() == 11);
  CHECK(run({"gallery"}).code == kExitUsage);
}

TEST_CASE("report and global flags") {
  const Run r = run({"report", problem("g6")});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["classification"]["case"] == 2);
  CHECK(j["audits"].size() == 2);
  const Run loose = run({"--tol", "1e-12", "classify", problem("indeterminate")});
  CHECK(loose.code == 0);
  CHECK(Json::parse(loose.out)["case"] == 2);
  CHECK(run({"classify", problem("indeterminate"), "--tol", "1e-12"}).code == 0);
  CHECK(run({"--tol", "-1", "classify", problem("g2")}).code == kExitUsage);
  const Run dense = run({"--grid-density", "10", "audit", problem("g2"), "--solution", "quarter"});
  CHECK(std::abs(Json::parse(dense.out)["estimate"].get<double>() - 0.25 * 0.81) < 1e-12);
  CHECK(run({"--seedless", "classify", problem("g2")}).code == 0);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"classify"}).code == kExitUsage);
  CHECK(run({"classify", problem("g2"), "--bogus"}).code == kExitUsage);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("classify") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
  CHECK(run({"gallery", "--all", "--json"}).out == run({"gallery", "--all", "--json"}).out);
  CHECK(run({"report", problem("g2")}).out == run({"report", problem("g2")}).out);
}
