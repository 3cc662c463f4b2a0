#include "ffst/io/scenario_json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/core.h>

namespace ffst::io {

using harness::ScenarioError;
using nlohmann::json;

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string type_name(const json& v) { return v.type_name(); }

// Read-side view of one JSON object. Every key read is remembered so that
// finish() can reject the ones nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object())
      throw ScenarioError(path_.empty() ? "<document>" : path_,
                          fmt::format("expected an object, got {}", type_name(obj_)));
  }

  const std::string& path() const { return path_; }
  std::string key_path(std::string_view key) const { return join(path_, key); }

  const json* find(std::string_view key) {
    seen_.insert(std::string(key));
    const auto it = obj_.find(std::string(key));
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  const json& require(std::string_view key) {
    const json* v = find(key);
    if (!v) throw ScenarioError(key_path(key), "is required");
    return *v;
  }

  double number(std::string_view key, double fallback) {
    const json* v = find(key);
    return v ? as_number(*v, key_path(key)) : fallback;
  }
  std::optional<double> optional_number(std::string_view key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return as_number(*v, key_path(key));
  }
  bool boolean(std::string_view key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean())
      throw ScenarioError(key_path(key), fmt::format("expected true or false, got {}", type_name(*v)));
    return v->get<bool>();
  }
  std::string string(std::string_view key, std::string fallback) {
    const json* v = find(key);
    return v ? as_string(*v, key_path(key)) : fallback;
  }
  std::int64_t integer(std::string_view key, std::int64_t fallback) {
    const json* v = find(key);
    return v ? as_integer(*v, key_path(key)) : fallback;
  }
  std::vector<double> numbers(std::string_view key) {
    const json* v = find(key);
    if (!v) return {};
    return as_numbers(*v, key_path(key));
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (!seen_.count(key)) throw ScenarioError(key_path(key), "unknown key");
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ScenarioError(path, fmt::format("expected a number, got {}", type_name(v)));
    return v.get<double>();
  }
  static std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ScenarioError(path, fmt::format("expected a string, got {}", type_name(v)));
    return v.get<std::string>();
  }
  static std::int64_t as_integer(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15)
        return static_cast<std::int64_t>(d);
    }
    throw ScenarioError(path, fmt::format("expected an integer, got {}", v.dump()));
  }
  static std::vector<double> as_numbers(const json& v, const std::string& path) {
    if (!v.is_array()) throw ScenarioError(path, fmt::format("expected an array, got {}", type_name(v)));
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(as_number(v[i], fmt::format("{}[{}]", path, i)));
    return out;
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class Enum, class Parser>
Enum parse_enum(const std::string& text, const std::string& path, Parser parser,
                std::string_view choices) {
  const auto value = parser(text);
  if (!value) throw ScenarioError(path, fmt::format("unknown value \"{}\" (expected {})", text, choices));
  return *value;
}

std::optional<speed::SampleInterpolation> parse_interpolation(std::string_view name) {
  if (name == "cubic-spline") return speed::SampleInterpolation::cubic_spline;
  if (name == "linear") return speed::SampleInterpolation::linear;
  return std::nullopt;
}

std::string_view to_string(speed::SampleInterpolation i) {
  return i == speed::SampleInterpolation::linear ? "linear" : "cubic-spline";
}

std::optional<harness::InitialKind> parse_initial_kind(std::string_view name) {
  if (name == "gaussian") return harness::InitialKind::gaussian;
  if (name == "eigenstate") return harness::InitialKind::eigenstate;
  return std::nullopt;
}

std::string_view to_string(harness::InitialKind k) {
  return k == harness::InitialKind::gaussian ? "gaussian" : "eigenstate";
}

std::size_t as_size(std::int64_t v, const std::string& path) {
  if (v < 0) throw ScenarioError(path, fmt::format("must be non-negative, got {}", v));
  return static_cast<std::size_t>(v);
}

void read_grid(ObjectReader r, harness::GridSpec& g) {
  g.n_points = as_size(r.integer("n_points", static_cast<std::int64_t>(g.n_points)),
                       r.key_path("n_points"));
  g.x_min = r.number("x_min", g.x_min);
  g.x_max = r.number("x_max", g.x_max);
  r.finish();
}

void read_constants(ObjectReader r, PhysicalConstants& c) {
  c.hbar = r.number("hbar", c.hbar);
  c.mass = r.number("mass", c.mass);
  r.finish();
}

void read_initial(ObjectReader r, harness::InitialStateSpec& s) {
  s.kind = parse_enum<harness::InitialKind>(r.string("kind", "gaussian"), r.key_path("kind"),
                                            parse_initial_kind, "gaussian, eigenstate");
  if (s.kind == harness::InitialKind::gaussian) {
    s.x0 = r.number("x0", s.x0);
    s.k0 = r.number("k0", s.k0);
    s.sigma = r.number("sigma", s.sigma);
  } else {
    const auto index = r.integer("index", 0);
    if (index < 0 || index > std::numeric_limits<int>::max())
      throw ScenarioError(r.key_path("index"), fmt::format("must be a non-negative integer, got {}", index));
    s.index = static_cast<int>(index);
  }
  r.finish();
}

void read_potential(ObjectReader r, harness::PotentialSpec& p) {
  p.kind = parse_enum<harness::PotentialKind>(r.string("kind", "harmonic"), r.key_path("kind"),
                                              harness::parse_potential_kind,
                                              "free, harmonic, anharmonic, box");
  p.omega = r.number("omega", p.omega);
  p.center = r.number("center", p.center);
  p.drive_amplitude = r.number("drive_amplitude", p.drive_amplitude);
  p.drive_frequency = r.number("drive_frequency", p.drive_frequency);
  p.quartic = r.number("quartic", p.quartic);
  p.half_width = r.number("half_width", p.half_width);
  p.depth = r.number("depth", p.depth);
  p.wall_width = r.number("wall_width", p.wall_width);
  if (r.find("family"))
    p.family = parse_enum<harness::FamilyKind>(r.string("family", ""), r.key_path("family"),
                                               harness::parse_family_kind,
                                               "translation, compression");
  r.finish();
}

harness::AlphaSpec read_alpha(ObjectReader r) {
  harness::AlphaSpec a;
  a.kind = parse_enum<speed::AlphaKind>(
      ObjectReader::as_string(r.require("kind"), r.key_path("kind")), r.key_path("kind"),
      speed::parse_alpha_kind,
      "constant, smooth-ramp, pause-window, reverse-window, custom-samples");
  a.reference_duration = r.number("reference_duration", a.reference_duration);
  a.exact_target = r.boolean("exact_target", a.exact_target);
  a.duration = r.optional_number("duration");
  a.value = r.optional_number("value");
  a.ramp_fraction = r.number("ramp_fraction", a.ramp_fraction);
  if (const json* w = r.find("window")) {
    ObjectReader wr(*w, r.key_path("window"));
    speed::AlphaWindow window{};
    window.start = ObjectReader::as_number(wr.require("start"), wr.key_path("start"));
    window.end = ObjectReader::as_number(wr.require("end"), wr.key_path("end"));
    window.ramp = ObjectReader::as_number(wr.require("ramp"), wr.key_path("ramp"));
    wr.finish();
    a.window = window;
  }
  if (const json* smp = r.find("samples")) {
    ObjectReader sr(*smp, r.key_path("samples"));
    a.sample_times = sr.numbers("times");
    a.sample_values = sr.numbers("values");
    sr.finish();
  }
  a.interpolation = parse_enum<speed::SampleInterpolation>(
      r.string("interpolation", "cubic-spline"), r.key_path("interpolation"), parse_interpolation,
      "cubic-spline, linear");
  r.finish();
  return a;
}

harness::RSpec read_r(ObjectReader r) {
  harness::RSpec s;
  s.kind = parse_enum<sta::RKind>(ObjectReader::as_string(r.require("kind"), r.key_path("kind")),
                                  r.key_path("kind"), sta::parse_r_kind, "quintic, custom-samples");
  if (s.kind == sta::RKind::quintic) {
    s.r_initial = ObjectReader::as_number(r.require("r_initial"), r.key_path("r_initial"));
    s.r_final = ObjectReader::as_number(r.require("r_final"), r.key_path("r_final"));
    s.duration = ObjectReader::as_number(r.require("duration"), r.key_path("duration"));
  } else {
    ObjectReader sr(r.require("samples"), r.key_path("samples"));
    s.sample_times = sr.numbers("times");
    s.sample_values = sr.numbers("values");
    s.sample_velocities = sr.numbers("velocities");
    sr.finish();
    if (!s.sample_times.empty()) s.duration = s.sample_times.back();
    if (!s.sample_values.empty()) {
      s.r_initial = s.sample_values.front();
      s.r_final = s.sample_values.back();
    }
  }
  r.finish();
  return s;
}

void read_numerics(ObjectReader r, harness::NumericsSpec& n) {
  n.dt = r.number("dt", n.dt);
  n.dt_ref = r.optional_number("dt_ref");
  n.node_threshold = r.optional_number("node_threshold");
  n.drive_step_fraction = r.number("drive_step_fraction", n.drive_step_fraction);
  n.family_step = r.optional_number("family_step");
  n.omit_auxiliary = r.boolean("omit_auxiliary", n.omit_auxiliary);
  n.scaling_partner_duration = r.optional_number("scaling_partner_duration");
  if (const json* ladder = r.find("convergence_ladder")) {
    const std::string path = r.key_path("convergence_ladder");
    if (!ladder->is_array()) throw ScenarioError(path, "expected an array of {n_points, dt}");
    for (std::size_t i = 0; i < ladder->size(); ++i) {
      ObjectReader rr((*ladder)[i], fmt::format("{}[{}]", path, i));
      harness::LadderRung rung{};
      rung.n_points = as_size(ObjectReader::as_integer(rr.require("n_points"), rr.key_path("n_points")),
                              rr.key_path("n_points"));
      rung.dt = ObjectReader::as_number(rr.require("dt"), rr.key_path("dt"));
      rr.finish();
      n.convergence_ladder.push_back(rung);
    }
  }
  r.finish();
}

void read_thresholds(ObjectReader r, harness::Thresholds& t) {
  t.final_fidelity_min = r.optional_number("final_fidelity_min");
  t.final_fidelity_max = r.optional_number("final_fidelity_max");
  t.density_l2_max = r.optional_number("density_l2_max");
  t.norm_dev_max = r.number("norm_dev_max", t.norm_dev_max);
  t.pause_drift_max = r.optional_number("pause_drift_max");
  t.reversal_fidelity_min = r.optional_number("reversal_fidelity_min");
  t.reference_fidelity_min = r.optional_number("reference_fidelity_min");
  t.phase_oracle_max = r.optional_number("phase_oracle_max");
  t.scaling_deviation_max = r.optional_number("scaling_deviation_max");
  t.convergence_order_min = r.optional_number("convergence_order_min");
  t.convergence_ratio_min = r.optional_number("convergence_ratio_min");
  r.finish();
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

harness::Scenario parse_scenario(const json& doc) {
  ObjectReader r(doc, "");
  harness::Scenario s;
  s.name = ObjectReader::as_string(r.require("name"), "name");
  s.description = r.string("description", "");
  s.branch = parse_enum<harness::Branch>(
      ObjectReader::as_string(r.require("branch"), "branch"), "branch", harness::parse_branch,
      "speed-control, sta-transport, sta-compression, sta-phase-ode");
  if (const json* v = r.find("grid")) read_grid(ObjectReader(*v, "grid"), s.grid);
  if (const json* v = r.find("constants")) read_constants(ObjectReader(*v, "constants"), s.constants);
  if (is_sta(s.branch)) s.initial_state.kind = harness::InitialKind::eigenstate;
  if (const json* v = r.find("initial_state")) read_initial(ObjectReader(*v, "initial_state"), s.initial_state);
  if (const json* v = r.find("potential")) read_potential(ObjectReader(*v, "potential"), s.potential);
  const json& schedule = r.require("schedule");
  if (s.branch == harness::Branch::speed_control)
    s.alpha = read_alpha(ObjectReader(schedule, "schedule"));
  else
    s.r = read_r(ObjectReader(schedule, "schedule"));
  if (const json* v = r.find("numerics")) read_numerics(ObjectReader(*v, "numerics"), s.numerics);
  s.checkpoints = r.numbers("checkpoints");
  if (const json* v = r.find("thresholds")) read_thresholds(ObjectReader(*v, "thresholds"), s.thresholds);
  r.finish();
  harness::validate_scenario(s);
  return s;
}

json scenario_to_json(const harness::Scenario& s) {
  json j;
  j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  j["branch"] = std::string(to_string(s.branch));
  j["grid"] = {{"n_points", s.grid.n_points}, {"x_min", s.grid.x_min}, {"x_max", s.grid.x_max}};
  j["constants"] = {{"hbar", s.constants.hbar}, {"mass", s.constants.mass}};

  json init = {{"kind", std::string(to_string(s.initial_state.kind))}};
  if (s.initial_state.kind == harness::InitialKind::gaussian) {
    init["x0"] = s.initial_state.x0;
    init["k0"] = s.initial_state.k0;
    init["sigma"] = s.initial_state.sigma;
  } else {
    init["index"] = s.initial_state.index;
  }
  j["initial_state"] = init;

  const auto& p = s.potential;
  json pot = {{"kind", std::string(to_string(p.kind))},
              {"omega", p.omega},
              {"center", p.center},
              {"drive_amplitude", p.drive_amplitude},
              {"drive_frequency", p.drive_frequency},
              {"quartic", p.quartic},
              {"half_width", p.half_width},
              {"depth", p.depth},
              {"wall_width", p.wall_width}};
  if (p.family) pot["family"] = std::string(to_string(*p.family));
  j["potential"] = pot;

  if (s.alpha) {
    const auto& a = *s.alpha;
    json sched = {{"kind", std::string(speed::to_string(a.kind))},
                  {"reference_duration", a.reference_duration},
                  {"exact_target", a.exact_target},
                  {"ramp_fraction", a.ramp_fraction},
                  {"interpolation", std::string(to_string(a.interpolation))}};
    put(sched, "duration", a.duration);
    put(sched, "value", a.value);
    if (a.window)
      sched["window"] = {{"start", a.window->start}, {"end", a.window->end}, {"ramp", a.window->ramp}};
    if (!a.sample_times.empty() || !a.sample_values.empty())
      sched["samples"] = {{"times", a.sample_times}, {"values", a.sample_values}};
    j["schedule"] = sched;
  } else if (s.r) {
    const auto& r = *s.r;
    json sched = {{"kind", std::string(sta::to_string(r.kind))}};
    if (r.kind == sta::RKind::quintic) {
      sched["r_initial"] = r.r_initial;
      sched["r_final"] = r.r_final;
      sched["duration"] = r.duration;
    } else {
      sched["samples"] = {{"times", r.sample_times},
                          {"values", r.sample_values},
                          {"velocities", r.sample_velocities}};
    }
    j["schedule"] = sched;
  }

  const auto& n = s.numerics;
  json num = {{"dt", n.dt},
              {"drive_step_fraction", n.drive_step_fraction},
              {"omit_auxiliary", n.omit_auxiliary}};
  put(num, "dt_ref", n.dt_ref);
  put(num, "node_threshold", n.node_threshold);
  put(num, "family_step", n.family_step);
  put(num, "scaling_partner_duration", n.scaling_partner_duration);
  if (!n.convergence_ladder.empty()) {
    json ladder = json::array();
    for (const auto& rung : n.convergence_ladder)
      ladder.push_back({{"n_points", rung.n_points}, {"dt", rung.dt}});
    num["convergence_ladder"] = ladder;
  }
  j["numerics"] = num;
  if (!s.checkpoints.empty()) j["checkpoints"] = s.checkpoints;

  const auto& t = s.thresholds;
  json th = {{"norm_dev_max", t.norm_dev_max}};
  put(th, "final_fidelity_min", t.final_fidelity_min);
  put(th, "final_fidelity_max", t.final_fidelity_max);
  put(th, "density_l2_max", t.density_l2_max);
  put(th, "pause_drift_max", t.pause_drift_max);
  put(th, "reversal_fidelity_min", t.reversal_fidelity_min);
  put(th, "reference_fidelity_min", t.reference_fidelity_min);
  put(th, "phase_oracle_max", t.phase_oracle_max);
  put(th, "scaling_deviation_max", t.scaling_deviation_max);
  put(th, "convergence_order_min", t.convergence_order_min);
  put(th, "convergence_ratio_min", t.convergence_ratio_min);
  j["thresholds"] = th;
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("<file>", fmt::format("cannot read {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("<file>", fmt::format("{} is not valid JSON: {}", path.string(), e.what()));
  }
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ScenarioError("--set", fmt::format("expected key=value, got \"{}\"", assignment));
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ScenarioError(key, "empty path segment");
    if (node->is_null()) *node = json::object();
    if (node->is_array()) {
      std::size_t index = 0;
      const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), index);
      if (ec != std::errc{} || ptr != part.data() + part.size() || index >= node->size())
        throw ScenarioError(key, fmt::format("\"{}\" is not a valid array index", part));
      node = &(*node)[index];
    } else if (node->is_object()) {
      node = &(*node)[part];
    } else {
      throw ScenarioError(key, fmt::format("cannot descend into a {} at \"{}\"", node->type_name(), part));
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

}  // namespace ffst::io
