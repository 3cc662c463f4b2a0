#include "ffst/io/report_json.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"

namespace ffst::io {

using nlohmann::json;

namespace {

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InvalidArgument(fmt::format("report field {} is not a number: {}", what, j.dump()));
}

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidArgument(fmt::format("report is missing \"{}\"", key));
  return *it;
}

json number_map(const std::map<std::string, double>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k] = number(v);
  return out;
}

std::map<std::string, double> number_map(const json& j, const char* what) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) out[k] = number(v, what);
  return out;
}

}  // namespace

json report_to_json(const harness::Report& r) {
  json j;
  j["scenario"] = r.scenario;
  j["branch"] = r.branch;
  j["status"] = std::string(to_string(r.status));
  j["pass"] = r.passed();
  j["diagnostic"] = r.diagnostic;
  json checkpoints = json::array();
  for (const auto& c : r.checkpoints)
    checkpoints.push_back({{"time", number(c.time)},
                           {"lambda_or_R", number(c.lambda_or_r)},
                           {"fidelity", number(c.fidelity)},
                           {"density_l2_error", number(c.density_l2_error)},
                           {"norm_dev", number(c.norm_dev)},
                           {"energy", number(c.energy)},
                           {"max_abs_vff", number(c.max_abs_vff)}});
  j["checkpoints"] = checkpoints;
  j["metrics"] = number_map(r.metrics);
  json targets = json::array();
  for (const auto& t : r.targets)
    targets.push_back({{"name", t.name},
                       {"value", number(t.value)},
                       {"limit", number(t.limit)},
                       {"kind", t.kind},
                       {"passed", t.passed}});
  j["targets"] = targets;
  if (r.convergence) {
    json rungs = json::array();
    for (const auto& g : r.convergence->rungs)
      rungs.push_back({{"n_points", g.n_points}, {"dt", number(g.dt)}, {"error", number(g.error)}});
    json conv = {{"rungs", rungs}, {"monotone", r.convergence->monotone}};
    conv["order"] = r.convergence->order ? number(*r.convergence->order) : json(nullptr);
    conv["min_ratio"] = r.convergence->min_ratio ? number(*r.convergence->min_ratio) : json(nullptr);
    j["convergence"] = conv;
  } else {
    j["convergence"] = nullptr;
  }
  j["parameters"] = number_map(r.parameters);
  j["wall_clock_seconds"] = number(r.wall_clock_seconds);
  return j;
}

harness::Report report_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("report must be a JSON object");
  harness::Report r;
  r.scenario = field(j, "scenario").get<std::string>();
  r.branch = field(j, "branch").get<std::string>();
  const auto status = harness::parse_run_status(field(j, "status").get<std::string>());
  if (!status) throw InvalidArgument("report status is not recognised");
  r.status = *status;
  if (field(j, "pass").get<bool>() != r.passed())
    throw InvalidArgument("report \"pass\" disagrees with its status");
  r.diagnostic = field(j, "diagnostic").get<std::string>();
  for (const auto& c : field(j, "checkpoints"))
    r.checkpoints.push_back({number(field(c, "time"), "time"),
                             number(field(c, "lambda_or_R"), "lambda_or_R"),
                             number(field(c, "fidelity"), "fidelity"),
                             number(field(c, "density_l2_error"), "density_l2_error"),
                             number(field(c, "norm_dev"), "norm_dev"),
                             number(field(c, "energy"), "energy"),
                             number(field(c, "max_abs_vff"), "max_abs_vff")});
  r.metrics = number_map(field(j, "metrics"), "metrics");
  for (const auto& t : field(j, "targets"))
    r.targets.push_back({field(t, "name").get<std::string>(), number(field(t, "value"), "value"),
                         number(field(t, "limit"), "limit"), field(t, "kind").get<std::string>(),
                         field(t, "passed").get<bool>()});
  const json& conv = field(j, "convergence");
  if (!conv.is_null()) {
    harness::ConvergenceRecord rec;
    for (const auto& g : field(conv, "rungs"))
      rec.rungs.push_back({field(g, "n_points").get<std::size_t>(), number(field(g, "dt"), "dt"),
                           number(field(g, "error"), "error")});
    rec.monotone = field(conv, "monotone").get<bool>();
    if (!field(conv, "order").is_null()) rec.order = number(field(conv, "order"), "order");
    if (!field(conv, "min_ratio").is_null()) rec.min_ratio = number(field(conv, "min_ratio"), "min_ratio");
    r.convergence = std::move(rec);
  }
  r.parameters = number_map(field(j, "parameters"), "parameters");
  r.wall_clock_seconds = number(field(j, "wall_clock_seconds"), "wall_clock_seconds");
  return r;
}

}  // namespace ffst::io
