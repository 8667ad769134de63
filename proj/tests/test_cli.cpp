#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "betacoal/error.h"
#include "betacoal/exact.h"
#include "cli.h"
#include "oracles.h"

using namespace betacoal;
using cli::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string log;
};

Result invoke(const std::string& command, const std::string& config, cli::Options options = {}) {
  std::ostringstream out;
  std::ostringstream log;
  const int code = cli::run(command, cli::parse_config(config), options, out, log);
  return {code, out.str(), log.str()};
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("command list") {
  const auto& names = cli::command_names();
  CHECK(names.size() == 6);
  CHECK(invoke("nope", "{}").code == cli::kExitConfig);
}

TEST_CASE("simulate validation") {
  CHECK(invoke("simulate", R"({"a":1,"b":1,"n":3,"replicates":0})").code == cli::kExitConfig);
  CHECK(invoke("simulate", R"({"b":1,"n":3,"replicates":5})").code == cli::kExitConfig);
  CHECK(invoke("simulate", R"({"a":1,"b":1,"n":3,"replicates":5,"colour":2})").code == cli::kExitConfig);
  CHECK(invoke("simulate", R"({"a":1,"b":1,"n":"3","replicates":5})").code == cli::kExitConfig);
  CHECK(invoke("simulate", R"({"a":-1,"b":1,"n":3,"replicates":5})").code == cli::kExitConfig);
  CHECK_THROWS_AS(cli::parse_config("{\"a\": "), ConfigError);
  const auto bad = invoke("simulate", R"({"a":1,"b":1,"n":3,"replicates":0})");
  CHECK(bad.out.empty());
  CHECK_FALSE(bad.log.empty());
}

TEST_CASE("simulate output") {
  const std::string config = R"({"a":1,"b":1,"n":3,"replicates":100000,"seed":7})";
  const auto r = invoke("simulate", config);
  REQUIRE(r.code == 0);
  const auto table = rows(r.out);
  REQUIRE(table.size() == 100001);
  CHECK(table[0] == std::vector<std::string>{"replicate", "n", "a", "b", "X", "tau", "L", "M"});
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t i = 1; i < table.size(); ++i) {
    REQUIRE(table[i].size() == 8);
    CHECK(table[i][7].empty());
    const double x = std::stod(table[i][4]);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / 1e5;
  const double sd = std::sqrt(sq / 1e5 - mean * mean);
  CHECK(std::abs(mean - 1.75) <= 4.0 * sd / std::sqrt(1e5));

  cli::Options eight;
  eight.workers = 8;
  CHECK(invoke("simulate", config, eight).out == r.out);
  CHECK(invoke("simulate", config).out == r.out);

  cli::Options reseeded;
  reseeded.seed = 8;
  CHECK(invoke("simulate", config, reseeded).out != r.out);

  const auto with_m = invoke("simulate", R"({"a":1,"b":1,"n":10,"replicates":3,"mutation_rate":2})");
  for (const auto& row : rows(with_m.out)) CHECK_FALSE(row.back().empty());
}

TEST_CASE("exact-moments") {
  const auto r = invoke("exact-moments", R"({"b":1,"j_max":2,"n_grid":[128,256,1024,16384]})");
  REQUIRE(r.code == 0);
  const auto table = rows(r.out);
  CHECK(table[0] == std::vector<std::string>{"n", "j", "functional", "exact", "prediction", "residual_scaled"});
  std::vector<double> residual_j1;
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (table[i][1] == "0") {
      CHECK(table[i][3] == "1");
      CHECK(table[i][4] == "1");
    }
    if (table[i][1] == "1") residual_j1.push_back(std::stod(table[i][5]));
  }
  CHECK(residual_j1.size() == 4);
  for (double v : residual_j1) CHECK(std::isfinite(v));

  const auto l = invoke("exact-moments", R"({"b":2,"functional":"L","j_max":1,"n_grid":[50]})");
  REQUIRE(l.code == 0);
  const auto lt = rows(l.out);
  const double expected = exact_moments_L(50, 1, {1.0, 2.0, std::nullopt}).at(50, 1);
  CHECK(std::stod(lt[2][3]) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(lt[2][2] == "L");

  CHECK(invoke("exact-moments", R"({"a":0.5,"b":1,"n_grid":[100]})").code == cli::kExitRegime);
  CHECK(invoke("exact-moments", R"({"b":1,"n_grid":[]})").code == cli::kExitConfig);
  CHECK(invoke("exact-moments", R"({"b":1,"n_grid":[2]})").code == cli::kExitConfig);
  CHECK(invoke("exact-moments", R"({"b":1,"functional":"tau","n_grid":[10]})").code == cli::kExitConfig);
  CHECK(invoke("exact-moments", R"({"b":1,"n_grid":[30000]})").code == cli::kExitResource);
}

TEST_CASE("limit-check") {
  const auto r = invoke("limit-check",
                        R"({"a":0.5,"b":1,"n_grid":[200,2000],"replicates":4000,"seed":3,"metrics":["chi_T","ks"]})");
  REQUIRE(r.code == 0);
  const auto table = rows(r.out);
  CHECK(table[0] == std::vector<std::string>{"n", "metric", "value"});
  REQUIRE(table.size() == 5);
  for (std::size_t i = 1; i < table.size(); ++i) {
    const double v = std::stod(table[i][2]);
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
  }
  CHECK(invoke("limit-check", R"({"a":0.5,"b":1,"n_grid":[]})").code == cli::kExitConfig);
  CHECK(invoke("limit-check", R"({"a":1.5,"b":1,"n_grid":[100]})").code == cli::kExitRegime);
  CHECK(invoke("limit-check", R"({"a":0.5,"b":1,"functional":"L","n_grid":[100]})").code == cli::kExitRegime);
  CHECK(invoke("limit-check", R"({"a":1,"b":1,"functional":"M","n_grid":[100]})").code == cli::kExitRegime);
  CHECK(invoke("limit-check", R"({"a":1,"b":1,"n_grid":[100],"metrics":["energy"]})").code == cli::kExitConfig);
  CHECK(invoke("limit-check", R"({"a":1,"b":1,"metrics":[]})").code == cli::kExitConfig);

  const auto m = invoke("limit-check",
                        R"({"a":1,"b":1,"mutation_rate":1.5,"functional":"M","n_grid":[500],"replicates":500,"metrics":["chi_T"]})");
  CHECK(m.code == 0);

  const auto exact = invoke("limit-check", R"({"a":0.5,"b":1,"metrics":[],"exact_law_n_grid":[10,40]})");
  REQUIRE(exact.code == 0);
  const auto et = rows(exact.out);
  REQUIRE(et.size() == 5);
  CHECK(et[1][1] == "d1_exact");
  CHECK(et[2][1] == "d1_exact_over_n_pow_a");
  CHECK(std::stod(et[2][2]) == doctest::Approx(std::stod(et[1][2]) / std::sqrt(10.0)).epsilon(1e-12));
}

TEST_CASE("branch-identity") {
  const auto r = invoke("branch-identity", R"({"b":1,"n_grid":[1000],"replicates":50,"seed":1})");
  REQUIRE(r.code == 0);
  CHECK(r.log.find("warning") != std::string::npos);
  const auto table = rows(r.out);
  CHECK(table[0] == std::vector<std::string>{"n", "estimate"});
  CHECK(std::stod(table[1][1]) > 0.0);
  CHECK(invoke("branch-identity", R"({"a":0.5,"b":1,"n_grid":[100],"replicates":10})").code == cli::kExitRegime);
  const auto quiet = invoke("branch-identity", R"({"b":1,"n_grid":[100],"replicates":200})");
  CHECK(quiet.log.find("warning") == std::string::npos);
}

TEST_CASE("branch-identity estimate matches the exact second moment") {
  // E(bL_n − X_n)² grows like E X_n, so the estimate shrinks like 1/log n
  for (double b : {1.0, 2.0}) {
    std::ostringstream config;
    config << R"({"b":)" << b << R"(,"n_grid":[300],"replicates":40000,"seed":9})";
    const auto r = invoke("branch-identity", config.str());
    REQUIRE(r.code == 0);
    const double estimate = std::stod(rows(r.out)[1][1]);
    const double exact = oracle::branch_gap_second_moment(300, b) / 300.0;
    CHECK(estimate == doctest::Approx(exact).epsilon(0.03));
  }
  // D_2 = 2T − 1 with T ~ Exp(1)
  CHECK(oracle::branch_gap_second_moment(2, 1.0) == doctest::Approx(5.0));
}

TEST_CASE("expansion-check and coefficients") {
  const auto e = invoke("expansion-check", R"({"min_exponent":7,"max_exponent":10,"b_values":[1]})");
  REQUIRE(e.code == 0);
  const auto et = rows(e.out);
  CHECK(et[0] == std::vector<std::string>{"suite", "b", "alpha", "p", "n", "value"});
  // 3 weighted, 3 decrement, 1 total, 1 inverse series of 4 points
  CHECK(et.size() == 1 + 8 * 4);
  CHECK(invoke("expansion-check", R"({"suites":["bogus"]})").code == cli::kExitConfig);
  CHECK(invoke("expansion-check", R"({"min_exponent":9,"max_exponent":8})").code == cli::kExitConfig);

  const auto c = invoke("coefficients", R"({"b_values":[1],"j_max":3,"alpha_p":[[1,1]]})");
  REQUIRE(c.code == 0);
  std::map<std::string, double> values;
  for (const auto& row : rows(c.out)) {
    if (row[0] == "quantity") continue;
    values[row[0] + row[2]] = std::stod(row[5]);
  }
  CHECK(values["m1"] == doctest::Approx(1.4227843350984671).epsilon(1e-14));
  CHECK(values["c"] == doctest::Approx(1.4227843350984671).epsilon(1e-14));
  CHECK(values["inversion_residual3"] <= 1e-11);
  CHECK(invoke("coefficients", R"({"alpha_p":[[0.2,1]],"b_values":[0.5]})").code == cli::kExitRegime);
}

TEST_CASE("reruns are byte-identical") {
  const std::string config = R"({"a":0.5,"b":1,"n_grid":[300],"replicates":1000,"seed":5})";
  CHECK(invoke("limit-check", config).out == invoke("limit-check", config).out);
  cli::Options four;
  four.workers = 4;
  CHECK(invoke("limit-check", config, four).out == invoke("limit-check", config).out);
}

}
