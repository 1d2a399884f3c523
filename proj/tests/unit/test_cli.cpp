#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"
#include "cli.hpp"
#include "json.hpp"
#include "revsphere/curvature.hpp"

using namespace revsphere;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "revsphere");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;
};

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream is(text);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      csv.comments.push_back(line.substr(2));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      csv.header = cells;
      first = false;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
    csv.rows.push_back(row);
  }
  return csv;
}

}  // namespace

TEST_CASE("profile of the unit sphere", "[cli]") {
  const Run r = invoke({"profile", "--family", "unit-sphere", "--samples", "10"});
  REQUIRE(r.code == 0);
  const Csv csv = parse_csv(r.out);
  CHECK(csv.header == std::vector<std::string>{"r", "m", "dm", "d2m", "curvature"});
  REQUIRE(csv.rows.size() == 10);
  for (const auto& row : csv.rows) CHECK(row[4] == 1.0);
}

TEST_CASE("CSV round-trips the computed table exactly", "[cli]") {
  const Run r = invoke({"profile", "--family", "lambda", "--lambda", "2.5", "--samples", "37"});
  REQUIRE(r.code == 0);
  const Csv csv = parse_csv(r.out);
  const MetricProfile p = make_lambda_profile(2.5);
  const auto grid = closed_grid(Interval(0.0, kPi), 37);
  REQUIRE(csv.rows.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Jet j = p.eval(grid[i]);
    CHECK(csv.rows[i][0] == grid[i]);
    CHECK(csv.rows[i][1] == j.f);
    CHECK(csv.rows[i][2] == j.d1);
    CHECK(csv.rows[i][3] == j.d2);
    CHECK(csv.rows[i][4] == gaussian_curvature(p, grid[i]));
  }
}

TEST_CASE("profile examples", "[cli]") {
  SECTION("lambda = 8 curvature has its interior minimum near pi/3") {
    const Csv csv = parse_csv(invoke({"profile", "--family", "lambda", "--lambda", "8", "--samples", "361"}).out);
    std::size_t best = 0;
    for (std::size_t i = 0; i < csv.rows.size() / 2; ++i)
      if (csv.rows[i][4] < csv.rows[best][4]) best = i;
    CHECK_THAT(csv.rows[best][0], WithinAbs(kPi / 3, kPi / 360));
  }
  SECTION("theorem-a n = 10 has m = 3 at the equator") {
    const Csv csv = parse_csv(invoke({"profile", "--family", "theorem-a", "--n", "10", "--samples", "201"}).out);
    CHECK_THAT(csv.rows[100][0], WithinAbs(kPi / 2, 1e-15));
    CHECK_THAT(csv.rows[100][1], WithinAbs(3.0, 1e-14));
  }
  SECTION("JSON wraps the same arrays") {
    const auto j = nlohmann::json::parse(invoke({"profile", "--samples", "5", "--format", "json"}).out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["family"]["name"] == "unit-sphere");
    CHECK(j["columns"]["r"].size() == 5);
    CHECK(j["columns"]["curvature"][2] == 1.0);
  }
}

TEST_CASE("halfperiod summaries", "[cli]") {
  const Run sphere = invoke({"halfperiod", "--samples", "8"});
  REQUIRE(sphere.code == 0);
  const Csv csv = parse_csv(sphere.out);
  for (const auto& row : csv.rows) CHECK_THAT(row[1], WithinAbs(kPi, 1e-7));
  REQUIRE(csv.comments.size() == 1);
  CHECK_THAT(csv.comments[0], ContainsSubstring("strictly_decreasing=false"));

  CHECK_THAT(invoke({"halfperiod", "--family", "lambda", "--lambda", "4"}).out,
             ContainsSubstring("strictly_decreasing=true"));
  const auto j = nlohmann::json::parse(invoke({"halfperiod", "--family", "theorem-a", "--n", "8", "--format", "json"}).out);
  CHECK(j["strictly_decreasing"] == true);
  CHECK(j["columns"]["phi"].size() == 50);
}

TEST_CASE("cutlocus of the round sphere", "[cli]") {
  const Run r = invoke({"cutlocus", "--family", "unit-sphere", "--r0", "1.0471975511965976", "--fan", "512",
                        "--directions", "8"});
  REQUIRE(r.code == 0);
  const Csv csv = parse_csv(r.out);
  CHECK(csv.header == std::vector<std::string>{"xi", "cut_r", "cut_theta", "cut_distance"});
  REQUIRE(csv.rows.size() == 8);
  for (const auto& row : csv.rows) {
    CHECK_THAT(row[1], WithinAbs(2 * kPi / 3, 1e-6));
    CHECK_THAT(row[2], WithinAbs(kPi, 1e-6));
  }
  CHECK_THAT(csv.comments.at(0), ContainsSubstring("verified=true"));
}

TEST_CASE("extrema reports", "[cli]") {
  const auto sphere = nlohmann::json::parse(invoke({"extrema", "--format", "json"}).out);
  CHECK(sphere["count"] == 0);
  CHECK_FALSE(sphere.contains("tk_diagnostics"));
  const auto j = nlohmann::json::parse(invoke({"extrema", "--family", "theorem-a", "--n", "12", "--format", "json"}).out);
  CHECK(j["count"].get<int>() >= 20);
  CHECK(j["tk_diagnostics"]["alternates"] == true);
  CHECK(j["tk_diagnostics"]["eps_small"] == true);
  const Csv csv = parse_csv(invoke({"extrema", "--family", "theorem-a", "--n", "4"}).out);
  CHECK(csv.rows.size() == 14);
}

TEST_CASE("verify selected checks", "[cli]") {
  const Run r = invoke({"verify", "--family", "lambda", "--lambda", "8", "--check", "curvature-min"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["checks"].size() == 1);
  CHECK_THAT(j["checks"][0]["metrics"]["minimizer"].get<double>(), WithinAbs(kPi / 3, 1e-6));

  const auto s = nlohmann::json::parse(invoke({"verify", "--check", "sin-multiple", "--n-max", "50"}).out);
  CHECK(s["all_passed"] == true);
  CHECK(s["checks"][0]["metrics"]["max_excess"]["value"].get<double>() <= 1e-12);
  CHECK(cli::check_names().size() == 12);
}

TEST_CASE("usage errors exit with status 2", "[cli]") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"profile", "--family", "torus"}).code == 2);
  CHECK(invoke({"profile", "--family", "lambda", "--n", "3"}).code == 2);
  CHECK(invoke({"profile", "--family", "lambda", "--lambda", "-1"}).code == 2);
  CHECK(invoke({"profile", "--family", "theorem-a", "--n", "1"}).code == 2);
  CHECK(invoke({"profile", "--family", "h", "--b", "cubic"}).code == 2);
  CHECK(invoke({"profile", "--family", "h", "--alpha", "0.7"}).code == 2);
  CHECK(invoke({"profile", "--format", "xml"}).code == 2);
  CHECK(invoke({"profile", "--samples", "1"}).code == 2);
  CHECK(invoke({"cutlocus", "--r0", "4"}).code == 2);
  CHECK(invoke({"cutlocus", "--fan", "10"}).code == 2);
  CHECK(invoke({"verify", "--check", "nonsense"}).code == 2);
  CHECK(invoke({"verify", "--format", "csv"}).code == 2);
  CHECK(invoke({"extrema", "--family", "theorem-a", "--delta", "2"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("B choices", "[cli]") {
  CHECK(cli::parse_b("sin2sq").describe() == "sin2sq");
  CHECK(cli::parse_b("sin2sq-poly:1,0.5").coefficients() == std::vector<double>{1.0, 0.5});
  CHECK_THROWS_AS(cli::parse_b("sin2sq-poly:"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_b("sin2sq-poly:1,x"), cli::UsageError);
  const Run r = invoke({"profile", "--family", "h", "--n", "4", "--b", "sin2sq-poly:1,-0.5", "--samples", "3", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["family"]["b"] == "sin2sq-poly:1,-0.5");
}

TEST_CASE("identical runs give identical bytes, also through --out", "[cli]") {
  const std::vector<std::string> args = {"halfperiod", "--family", "lambda", "--lambda", "4", "--format", "json"};
  const Run a = invoke(args);
  const Run b = invoke(args);
  CHECK(a.out == b.out);

  const auto path = std::filesystem::temp_directory_path() / "revsphere_cli_test.csv";
  REQUIRE(invoke({"profile", "--samples", "4", "--out", path.string()}).code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == invoke({"profile", "--samples", "4"}).out);
  std::filesystem::remove(path);
}
