// Acceptance suite: runs the bundled scenarios and prints one PASS/FAIL line
// per criterion. Limits are fixed here rather than read from the scenario
// files, so loosening a file cannot turn a line green.

#include <algorithm>
#include <functional>
#include <map>
#include <string>

#include <fmt/core.h>

#include "ffst/harness/runner.hpp"
#include "ffst/io/commands.hpp"

using namespace ffst;
using namespace ffst::harness;

namespace {

struct Line {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAILED]");
  }
};

class Suite {
 public:
  const Report& report(const std::string& name) {
    auto it = reports_.find(name);
    if (it == reports_.end()) {
      auto result = run_scenario(io::load_scenario("builtin:" + name));
      it = reports_.emplace(name, std::move(result.report)).first;
    }
    return it->second;
  }

  // Metric value, or NaN when the run failed before producing it.
  double metric(const std::string& name, const std::string& key) {
    const auto& r = report(name);
    const auto it = r.metrics.find(key);
    return it == r.metrics.end() ? std::nan("") : it->second;
  }

  const std::map<std::string, Report>& all() const { return reports_; }

 private:
  std::map<std::string, Report> reports_;
};

void ran_cleanly(Line& line, Suite& suite, const std::string& name) {
  const auto& r = suite.report(name);
  if (r.status == RunStatus::numerical_error) line.require(false, name + ": " + r.diagnostic);
}

Line at_least(Suite& suite, const std::string& name, const std::string& key, double limit) {
  Line line;
  ran_cleanly(line, suite, name);
  const double v = suite.metric(name, key);
  line.require(v >= limit, fmt::format("{} {} = {:.15g} (>= {:.12g})", name, key, v, limit));
  return line;
}

Line at_most(Suite& suite, const std::string& name, const std::string& key, double limit) {
  Line line;
  ran_cleanly(line, suite, name);
  const double v = suite.metric(name, key);
  line.require(v <= limit, fmt::format("{} {} = {:.6g} (<= {:g})", name, key, v, limit));
  return line;
}

void merge(Line& into, const Line& other) { into.require(other.passed, other.detail); }

}  // namespace

int main() {
  Suite suite;
  std::vector<std::pair<std::string, std::function<Line()>>> criteria;

  criteria.emplace_back("exact-target acceleration", [&] {
    Line line = at_least(suite, "01-accelerate", "final_fidelity", 0.999);
    line.require(suite.metric("01-accelerate", "exact_target") == 1.0, "closed-form target at t = 1");
    return line;
  });
  criteria.emplace_back("deceleration", [&] {
    Line line = at_least(suite, "02-decelerate", "final_fidelity", 0.999);
    line.require(suite.metric("02-decelerate", "exact_target") == 1.0, "closed-form target at t = 1");
    return line;
  });
  criteria.emplace_back("pause", [&] { return at_most(suite, "03-pause", "pause_drift", 1e-3); });
  criteria.emplace_back("reversal",
                        [&] { return at_least(suite, "04-reverse", "reversal_fidelity", 0.999); });
  criteria.emplace_back("transport and its control", [&] {
    Line line = at_least(suite, "05-transport", "final_fidelity", 0.999);
    merge(line, at_most(suite, "05-transport-control", "final_fidelity", 0.9));
    return line;
  });
  criteria.emplace_back("compression",
                        [&] { return at_least(suite, "06-compression", "final_fidelity", 0.999); });
  criteria.emplace_back("phase equation vs closed form", [&] {
    Line line = at_most(suite, "07-phase-ground", "phase_oracle_deviation", 1e-5);
    merge(line, at_most(suite, "07-phase-excited", "phase_oracle_deviation", 1e-4));
    return line;
  });
  criteria.emplace_back("scaling property", [&] {
    Line line = at_most(suite, "08-scaling", "scaling_deviation", 1e-8);
    auto a = io::load_scenario("builtin:08-scaling");
    auto b = a;
    b.r->duration = *a.numerics.scaling_partner_duration;
    const auto pair = verify_scaling_property(a, b);
    const auto it = pair.metrics.find("scaling_deviation");
    const double v = it == pair.metrics.end() ? std::nan("") : it->second;
    line.require(v <= 1e-8, fmt::format("pairwise check = {:.3g} (<= 1e-08)", v));
    return line;
  });
  criteria.emplace_back("identity schedule", [&] {
    return at_least(suite, "09-identity", "reference_fidelity", 1.0 - 1e-10);
  });
  criteria.emplace_back("numerical hygiene", [&] {
    Line line = at_least(suite, "10-dt-halving", "convergence_min_ratio", 3.5);
    double worst = 0.0;
    std::size_t checked = 0;
    for (const auto& [name, r] : suite.all()) {
      if (!r.passed()) continue;
      worst = std::max(worst, r.metrics.at("max_norm_dev"));
      ++checked;
    }
    line.require(worst <= 1e-8 && checked >= 10,
                 fmt::format("max norm deviation over {} passing runs = {:.3g} (<= 1e-08)", checked, worst));
    return line;
  });

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Line line;
    try {
      line = criteria[k].second();
    } catch (const std::exception& e) {
      line.require(false, e.what());
    }
    failures += line.passed ? 0 : 1;
    fmt::print("criterion {:>2} {:<30} {}  {}\n", k + 1, criteria[k].first, line.passed ? "PASS" : "FAIL",
               line.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures),
             criteria.size());
  return failures == 0 ? 0 : 1;
}
