#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ffst/harness/runner.hpp"
#include "ffst/io/builtin.hpp"
#include "ffst/io/commands.hpp"
#include "ffst/io/csv.hpp"
#include "ffst/io/report_json.hpp"
#include "ffst/io/scenario_json.hpp"
#include "scenario_fixtures.hpp"

using namespace ffst;
using namespace ffst::harness;
using namespace ffst::io;
using nlohmann::json;

namespace {

json builtin_doc(std::string_view name) {
  const auto b = find_builtin(name);
  REQUIRE(b);
  return json::parse(b->text);
}

// Key path named by the ScenarioError raised while parsing doc.
std::string rejected_key(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ScenarioError& e) {
    return e.key();
  }
  return "<accepted>";
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ffst_io_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path write_doc(const std::filesystem::path& dir, const json& doc) {
  const auto path = dir / "scenario.json";
  std::ofstream(path) << doc.dump(2);
  return path;
}

std::string first_line(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

// Small, quick compression run used where only the plumbing matters.
json quick_compression() {
  auto doc = builtin_doc("06-compression");
  doc["grid"]["n_points"] = 256;
  doc["grid"]["x_min"] = -10;
  doc["grid"]["x_max"] = 10;
  doc["numerics"]["dt"] = 1e-3;
  doc["thresholds"]["final_fidelity_min"] = 0.99;
  return doc;
}

}  // namespace

TEST_CASE("bundled scenarios parse, validate and cover every criterion") {
  const auto all = builtin_scenarios();
  CHECK(all.size() >= 8);
  std::set<std::string> prefixes;
  for (const auto& b : all) {
    INFO(b.name);
    const auto doc = json::parse(b.text);
    const auto s = parse_scenario(doc);
    CHECK(s.name == b.name);
    CHECK_FALSE(s.description.empty());
    prefixes.insert(std::string(b.name.substr(0, 2)));
  }
  for (int k = 1; k <= 10; ++k) CHECK(prefixes.count(k < 10 ? "0" + std::to_string(k) : "10") == 1);

  std::ostringstream listing;
  CHECK(cmd_list_builtin(listing) == kPass);
  std::size_t lines = 0;
  for (char c : listing.str()) lines += c == '\n';
  CHECK(lines == all.size());
}

TEST_CASE("scenario documents round-trip through JSON") {
  for (const auto& b : builtin_scenarios()) {
    INFO(b.name);
    const auto s = parse_scenario(json::parse(b.text));
    CHECK(parse_scenario(scenario_to_json(s)) == s);
  }
  for (const auto& s : {fixtures::acceleration(), fixtures::pause(), fixtures::reversal(),
                        fixtures::identity(), fixtures::phase_ode(1)})
    CHECK(parse_scenario(scenario_to_json(s)) == s);

  auto custom = fixtures::transport();
  custom.r = RSpec{sta::RKind::custom_samples, 0.0, 2.0, 2.0, {0.0, 1.0, 2.0}, {0.0, 1.0, 2.0},
                   {0.0, 1.5, 0.0}};
  CHECK(parse_scenario(scenario_to_json(custom)) == custom);
}

TEST_CASE("unknown keys are rejected with their path") {
  auto doc = builtin_doc("05-transport");
  doc["colour"] = "blue";
  CHECK(rejected_key(doc) == "colour");

  doc = builtin_doc("05-transport");
  doc["grid"]["spacing"] = 0.1;
  CHECK(rejected_key(doc) == "grid.spacing");

  doc = builtin_doc("03-pause");
  doc["schedule"]["window"]["width"] = 1;
  CHECK(rejected_key(doc) == "schedule.window.width");

  doc = builtin_doc("10-dt-halving");
  doc["numerics"]["convergence_ladder"][1]["order"] = 2;
  CHECK(rejected_key(doc) == "numerics.convergence_ladder[1].order");
}

TEST_CASE("schema and semantic errors name the offending key") {
  auto doc = builtin_doc("01-accelerate");
  doc["grid"]["n_points"] = 10;
  CHECK(rejected_key(doc) == "grid.n_points");

  doc = builtin_doc("01-accelerate");
  doc["initial_state"]["sigma"] = -1.0;
  CHECK(rejected_key(doc) == "initial_state.sigma");

  doc = builtin_doc("01-accelerate");
  doc["numerics"]["dt"] = "small";
  CHECK(rejected_key(doc) == "numerics.dt");

  doc = builtin_doc("01-accelerate");
  doc["grid"]["n_points"] = 1024.5;
  CHECK(rejected_key(doc) == "grid.n_points");

  doc = builtin_doc("01-accelerate");
  doc["branch"] = "teleport";
  CHECK(rejected_key(doc) == "branch");

  doc = builtin_doc("01-accelerate");
  doc.erase("schedule");
  CHECK(rejected_key(doc) == "schedule");

  doc = builtin_doc("05-transport");
  doc["schedule"]["kind"] = "smooth-ramp";
  CHECK(rejected_key(doc) == "schedule.kind");

  CHECK(rejected_key(json::array()) == "<document>");
}

TEST_CASE("dotted overrides") {
  auto doc = builtin_doc("10-dt-halving");
  apply_override(doc, "numerics.dt=5e-5");
  CHECK(doc["numerics"]["dt"].get<double>() == 5e-5);
  apply_override(doc, "name=renamed");
  CHECK(doc["name"] == "renamed");
  apply_override(doc, "numerics.convergence_ladder.0.dt=8e-4");
  CHECK(doc["numerics"]["convergence_ladder"][0]["dt"].get<double>() == 8e-4);
  apply_override(doc, "thresholds.density_l2_max=0.01");
  CHECK(parse_scenario(doc).thresholds.density_l2_max == 0.01);
  apply_override(doc, "checkpoints=[0, 0.25, 0.5]");
  CHECK(parse_scenario(doc).checkpoints.size() == 3);

  CHECK_THROWS_AS(apply_override(doc, "numerics.dt"), ScenarioError);
  CHECK_THROWS_AS(apply_override(doc, "numerics..dt=1"), ScenarioError);
  CHECK_THROWS_AS(apply_override(doc, "numerics.convergence_ladder.9.dt=1"), ScenarioError);
  CHECK_THROWS_AS(apply_override(doc, "name.first=x"), ScenarioError);
}

TEST_CASE("report JSON round-trip") {
  Report r;
  r.scenario = "synthetic";
  r.branch = "speed-control";
  r.status = RunStatus::threshold_failed;
  r.diagnostic = "threshold failure: \"quoted\"\nsecond line";
  r.checkpoints.push_back({0.1, 0.2, 0.99999999999, 1e-300, 3e-16, -0.5, 1.0 / 3.0});
  r.metrics["big"] = 1e300;
  r.metrics["ratio"] = std::numeric_limits<double>::infinity();
  r.metrics["negative"] = -std::numeric_limits<double>::infinity();
  add_target(r, "final_fidelity", 0.5, 0.999, true);
  r.convergence = ConvergenceRecord{{{512, 1e-3, 0.1}, {1024, 5e-4, 0.025}}, 2.0, 4.0, true};
  r.parameters["dt"] = 1e-4;
  r.wall_clock_seconds = 1.25;
  CHECK(report_from_json(report_to_json(r)) == r);
  CHECK(report_from_json(json::parse(report_to_json(r).dump())) == r);

  r.convergence = ConvergenceRecord{{{1024, 1e-4, 0.01}}, std::nullopt, std::nullopt, true};
  CHECK(report_from_json(json::parse(report_to_json(r).dump(2))) == r);
  r.convergence.reset();
  CHECK(report_from_json(json::parse(report_to_json(r).dump())) == r);

  auto lying = report_to_json(r);
  lying["pass"] = true;
  CHECK_THROWS_AS(report_from_json(lying), InvalidArgument);
}

TEST_CASE("run writes report, timeseries and field dumps") {
  const auto dir = scratch_dir("run");
  const auto path = write_doc(dir, quick_compression());
  std::ostringstream out, err;
  REQUIRE(cmd_run(path.string(), dir / "out", {}, out, err) == kPass);

  const auto report_path = dir / "out" / "report.json";
  std::ifstream in(report_path);
  const auto doc = json::parse(in);
  CHECK(doc["pass"] == true);
  const auto report = report_from_json(doc);
  CHECK(report.passed());
  // The file must carry exactly what the run produced.
  const auto rerun = run_scenario(load_scenario(path.string()));
  CHECK(same_results(report, rerun.report));

  CHECK(first_line(dir / "out" / "timeseries.csv") ==
        "time,lambda_or_R,fidelity,density_l2_error,norm_dev,energy,max_abs_vff");
  std::ifstream series(dir / "out" / "timeseries.csv");
  std::size_t rows = 0;
  for (std::string line; std::getline(series, line);) ++rows;
  CHECK(rows == report.checkpoints.size() + 1);
  for (std::size_t k = 0; k < report.checkpoints.size(); ++k) {
    CHECK(first_line(dir / "out" / ("density_" + std::to_string(k) + ".csv")) == "x,value");
    CHECK(first_line(dir / "out" / ("vff_" + std::to_string(k) + ".csv")) == "x,value");
  }
  CHECK_FALSE(std::filesystem::exists(dir / "out" / ("density_" + std::to_string(report.checkpoints.size()) + ".csv")));
}

TEST_CASE("exit codes") {
  const auto dir = scratch_dir("exit");
  std::ostringstream out, err;

  auto doc = quick_compression();
  doc["grid"]["n_points"] = 10;
  CHECK(cmd_run(write_doc(dir, doc).string(), dir / "a", {}, out, err) == kSchemaError);
  CHECK(err.str().find("grid.n_points") != std::string::npos);
  CHECK(cmd_validate(write_doc(dir, doc).string(), out, err) == kSchemaError);

  doc = builtin_doc("01-accelerate");
  doc["initial_state"]["sigma"] = -0.5;
  CHECK(cmd_validate(write_doc(dir, doc).string(), out, err) == kSchemaError);
  CHECK(cmd_validate("builtin:05-transport", out, err) == kPass);
  CHECK(cmd_validate("builtin:no-such-thing", out, err) == kSchemaError);
  CHECK(cmd_validate((dir / "missing.json").string(), out, err) == kSchemaError);
  std::ofstream(dir / "broken.json") << "{\"name\": ";
  CHECK(cmd_validate((dir / "broken.json").string(), out, err) == kSchemaError);

  // Crippled drive: the auxiliary potential is dropped but success is still demanded.
  doc = quick_compression();
  doc["numerics"]["omit_auxiliary"] = true;
  const auto crippled = write_doc(dir, doc);
  CHECK(cmd_run(crippled.string(), dir / "b", {}, out, err) == kThresholdFailure);
  const auto report = report_from_json(json::parse(std::ifstream(dir / "b" / "report.json")));
  CHECK(report.status == RunStatus::threshold_failed);
  CHECK(report.metrics.at("final_fidelity") < 0.99);

  // The target trap sits too close to the wall: propagation fails.
  CHECK(cmd_run(crippled.string(), dir / "c", {"numerics.omit_auxiliary=false", "grid.x_max=2.5",
                                                "grid.x_min=-2.5"},
                out, err) == kNumericalFailure);
  const auto failed = report_from_json(json::parse(std::ifstream(dir / "c" / "report.json")));
  CHECK(failed.status == RunStatus::numerical_error);
  CHECK_FALSE(failed.diagnostic.empty());

  CHECK(cmd_run(crippled.string(), dir / "d", {"numerics.omit_auxiliary=false"}, out, err) == kPass);
  CHECK(cmd_run(crippled.string(), dir / "e", {"numerics.dt=-1"}, out, err) == kSchemaError);
}

TEST_CASE("output directory defaults") {
  CHECK(resolve_out_dir(std::filesystem::path("given"), "x") == "given");
  ::setenv("FFST_OUT_DIR", "/tmp/ffst-env", 1);
  CHECK(resolve_out_dir(std::nullopt, "x") == "/tmp/ffst-env");
  ::unsetenv("FFST_OUT_DIR");
  CHECK(resolve_out_dir(std::nullopt, "x") == std::filesystem::path("ffst-out") / "x");
}
