#include <doctest.h>

#include <cmath>

#include "ffst/harness/runner.hpp"
#include "scenario_fixtures.hpp"

using namespace ffst;
using namespace ffst::harness;

namespace {

double metric(const Report& r, const std::string& name) {
  const auto it = r.metrics.find(name);
  REQUIRE_MESSAGE(it != r.metrics.end(), "missing metric " << name);
  return it->second;
}

void require_ran(const RunResult& res) {
  INFO(res.report.diagnostic);
  REQUIRE(res.report.status != RunStatus::numerical_error);
}

}  // namespace

TEST_CASE("acceleration reaches the closed-form target state") {
  const auto res = run_scenario(fixtures::acceleration());
  require_ran(res);
  CHECK(res.report.status == RunStatus::passed);
  CHECK(metric(res.report, "exact_target") == 1.0);
  CHECK(metric(res.report, "final_fidelity") >= 0.999);
  CHECK(metric(res.report, "max_norm_dev") <= 1e-8);
  CHECK(res.report.checkpoints.size() == 11);
  CHECK(res.report.checkpoints.back().lambda_or_r == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.fields.density.size() == 11);
  CHECK(res.fields.x.size() == 1024);
}

TEST_CASE("deceleration reaches the closed-form target state") {
  const auto res = run_scenario(fixtures::deceleration());
  require_ran(res);
  CHECK(metric(res.report, "final_fidelity") >= 0.999);
  CHECK(res.report.passed());
}

TEST_CASE("pause window freezes the density") {
  const auto res = run_scenario(fixtures::pause());
  require_ran(res);
  CHECK(metric(res.report, "pause_drift") <= 1e-3);
  CHECK(metric(res.report, "exact_target") == 0.0);
  CHECK(res.report.passed());
}

TEST_CASE("reverse window returns to the window-start state") {
  const auto res = run_scenario(fixtures::reversal());
  require_ran(res);
  CHECK(metric(res.report, "reversal_fidelity") >= 0.999);
  CHECK(res.report.passed());
}

TEST_CASE("identity schedule reproduces the reference run") {
  const auto res = run_scenario(fixtures::identity());
  require_ran(res);
  CHECK(metric(res.report, "reference_fidelity") >= 1.0 - 1e-10);
  for (const auto& c : res.report.checkpoints) CHECK(c.fidelity >= 1.0 - 1e-10);
  CHECK(res.report.passed());
}

TEST_CASE("transport with and without the auxiliary potential") {
  const auto driven = run_scenario(fixtures::transport());
  require_ran(driven);
  CHECK(metric(driven.report, "final_fidelity") >= 0.999);
  CHECK(driven.report.passed());

  auto control = fixtures::transport();
  control.numerics.omit_auxiliary = true;
  control.thresholds.final_fidelity_min.reset();
  control.thresholds.final_fidelity_max = 0.9;
  const auto bare = run_scenario(control);
  require_ran(bare);
  CHECK(metric(bare.report, "final_fidelity") <= 0.9);
  CHECK(bare.report.passed());
}

TEST_CASE("compression reaches the target ground state") {
  const auto res = run_scenario(fixtures::compression());
  require_ran(res);
  CHECK(metric(res.report, "final_fidelity") >= 0.999);
  CHECK(res.report.passed());
}

TEST_CASE("phase-equation drive transports the first excited state") {
  auto s = fixtures::phase_ode(1);
  s.numerics.family_step = 0.01;
  s.thresholds.final_fidelity_min = 0.995;
  s.thresholds.phase_oracle_max = 1e-4;
  const auto res = run_scenario(s);
  require_ran(res);
  CHECK(metric(res.report, "final_fidelity") >= 0.995);
  CHECK(metric(res.report, "phase_oracle_deviation") <= 1e-4);
  CHECK(res.report.passed());
}

TEST_CASE("scaling property across durations") {
  auto a = fixtures::phase_ode();
  a.numerics.family_step = 0.01;
  a.thresholds = {};
  a.thresholds.scaling_deviation_max = 1e-8;
  a.numerics.scaling_partner_duration = 3.0;
  auto b = a;
  b.r->duration = 3.0;
  const auto report = verify_scaling_property(a, b);
  INFO(report.diagnostic);
  CHECK(metric(report, "scaling_deviation") <= 1e-8);
  CHECK(report.passed());

  const auto same = verify_scaling_property(a, a);
  CHECK(metric(same, "scaling_deviation") == 0.0);

  auto moved = b;
  moved.r->r_final = 4.0;
  CHECK_THROWS_AS(verify_scaling_property(a, moved), ScenarioError);
}

TEST_CASE("convergence ladders") {
  auto s = fixtures::acceleration();
  const auto record = convergence_study(s, {{1024, 4e-4}, {1024, 2e-4}, {1024, 1e-4}});
  REQUIRE(record.rungs.size() == 3);
  CHECK(record.monotone);
  REQUIRE(record.order);
  CHECK(*record.order >= 1.8);

  const auto single = convergence_study(s, {{1024, 1e-4}});
  CHECK(single.rungs.size() == 1);
  CHECK_FALSE(single.order);
  CHECK(single.rungs.front().error > 0.0);
}

TEST_CASE("grid refinement lowers the density error") {
  auto s = fixtures::transport();
  const auto record = convergence_study(s, {{256, 1e-4}, {1024, 1e-4}});
  REQUIRE(record.rungs.size() == 2);
  CHECK(record.rungs[1].error <= record.rungs[0].error);
  CHECK_FALSE(record.order);
}

TEST_CASE("identical scenarios give identical reports") {
  auto s = fixtures::compression();
  s.grid.n_points = 512;
  s.numerics.dt = 5e-4;
  const auto first = run_scenario(s);
  const auto second = run_scenario(s);
  CHECK(same_results(first.report, second.report));
  const auto batch = run_batch({s, s}, 2);
  REQUIRE(batch.size() == 2);
  CHECK(same_results(batch[0].report, first.report));
  CHECK(same_results(batch[1].report, first.report));
}

TEST_CASE("failures are reported, never silently passed") {
  auto s = fixtures::transport();
  s.grid.x_min = -4.0;  // the target trap centre sits one unit from the wall
  s.grid.x_max = 5.0;
  const auto res = run_scenario(s);
  CHECK(res.report.status == RunStatus::numerical_error);
  CHECK_FALSE(res.report.diagnostic.empty());
  CHECK_FALSE(res.report.passed());

  auto bad = fixtures::acceleration();
  bad.grid.n_points = 10;
  CHECK_THROWS_AS(run_scenario(bad), ScenarioError);
  CHECK_THROWS_AS(run_sta(fixtures::acceleration()), ScenarioError);
}

TEST_CASE("a tight threshold marks the run as failed") {
  auto s = fixtures::compression();
  s.grid.n_points = 512;
  s.numerics.dt = 5e-4;
  s.thresholds.final_fidelity_max = 0.5;
  const auto res = run_scenario(s);
  CHECK(res.report.status == RunStatus::threshold_failed);
  CHECK(res.report.diagnostic.find("final_fidelity") != std::string::npos);
}
