#include <doctest.h>

#include "shrinkreg/cli.hpp"
#include "shrinkreg/report.hpp"
#include "shrinkreg/version.hpp"

#include "../support/errors.hpp"

#include <sstream>
#include <string>
#include <vector>

using namespace shrinkreg;
using testing::code_of;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "shrinkreg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("delta grid syntax") {
  CHECK(parse_delta_grid("0,0.5,1") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(parse_delta_grid("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(parse_delta_grid("2:2:1") == std::vector<double>{2.0});
  CHECK(code_of([] { parse_delta_grid("0:1"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_delta_grid("0:1:0"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_delta_grid("a,b"); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("simulate emits a json report") {
  const auto r = run({"simulate", "--reps", "40", "--delta-grid", "0,1", "--seed", "3", "--format", "json"});
  REQUIRE(r.status == kExitOk);
  const auto doc = Json::parse(r.out);
  CHECK(doc["command"] == "simulate");
  CHECK(doc["seed"] == 3);
  CHECK(doc["version"] == std::string(kVersion));
  CHECK(doc["results"].size() == 2);
  const auto table = rmse_table_from_json(doc);
  CHECK(table.rows.size() == 2);
  CHECK(table.replications == 40);
  CHECK(table.kinds.size() == 3);
  CHECK(table.value(1, EstimatorKind::Pretest) > 0.0);
}

TEST_CASE("simulate table and csv formats") {
  const auto table = run({"simulate", "--reps", "20", "--delta-grid", "0,0.5"});
  CHECK(table.status == kExitOk);
  CHECK(table.out.find("S+") != std::string::npos);
  const auto csv = run({"simulate", "--reps", "20", "--delta-grid", "0,0.5", "--format", "csv"});
  CHECK(csv.status == kExitOk);
  CHECK(csv.out.rfind("delta,", 0) == 0);
}

TEST_CASE("fit on a bundled dataset") {
  const auto r = run({"fit", "--data", "prostate", "--sub", "lcavol,lweight,svi", "--format", "json"});
  REQUIRE(r.status == kExitOk);
  const auto doc = Json::parse(r.out);
  CHECK(doc["command"] == "fit");
  CHECK(doc["config"]["response"] == "lpsa");
}

TEST_CASE("cv round-trips through json") {
  const auto r = run({"cv", "--data", "prostate", "--sub", "lcavol,lweight,svi", "--reps", "5", "--k", "5",
                      "--seed", "9", "--format", "json"});
  REQUIRE(r.status == kExitOk);
  const auto doc = Json::parse(r.out);
  const auto report = cv_report_from_json(doc);
  CHECK(report.repetitions == 5);
  CHECK(report.k == 5);
  CHECK(report.seed == 9);
  CHECK(!report.entries.empty());
  CHECK(to_json(report)["results"] == doc["results"]);
}

TEST_CASE("risk curve") {
  const auto r = run({"risk-curve", "--p1", "4", "--p2", "6", "--delta-grid", "0,10", "--format", "json"});
  REQUIRE(r.status == kExitOk);
  const auto table = rmse_table_from_json(Json::parse(r.out));
  CHECK(table.delta_label == "noncentrality");
  CHECK(table.value(0, EstimatorKind::Restricted) == doctest::Approx(2.5));
}

TEST_CASE("exit codes") {
  CHECK(run({"simulate", "--bogus"}).status == kExitUsage);
  CHECK(run({}).status == kExitUsage);
  CHECK(run({"simulate", "--p2", "2", "--estimators", "S+"}).status == kExitUsage);
  CHECK(run({"simulate", "--alpha", "2"}).status == kExitUsage);
  const auto missing = run({"fit", "--data", "/nonexistent.csv", "--response", "y"});
  CHECK(missing.status == kExitData);
  CHECK(!missing.err.empty());
  CHECK(run({"fit", "--data", "prostate", "--full", "lcavol,nothere"}).status == kExitData);
}

TEST_CASE("json errors") {
  const auto r = run({"fit", "--data", "/nonexistent.csv", "--response", "y", "--format", "json"});
  CHECK(r.status == kExitData);
  const auto doc = Json::parse(r.out);
  CHECK(doc["error"]["code"] == "FileNotFound");
  CHECK(!r.err.empty());
  const auto usage = run({"simulate", "--bogus", "--format", "json"});
  CHECK(usage.status == kExitUsage);
  CHECK(Json::parse(usage.out).contains("error"));
}
