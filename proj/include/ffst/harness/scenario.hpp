#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffst/core/errors.hpp"
#include "ffst/core/grid.hpp"
#include "ffst/speed/alpha_schedule.hpp"
#include "ffst/sta/r_schedule.hpp"

namespace ffst::harness {

/// A scenario field is missing, malformed or inconsistent. `key` is the dotted
/// path of the offending field, e.g. "grid.n_points".
class ScenarioError : public InvalidArgument {
 public:
  ScenarioError(std::string key, const std::string& message)
      : InvalidArgument(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class Branch { speed_control, sta_transport, sta_compression, sta_phase_ode };
std::string_view to_string(Branch b);
std::optional<Branch> parse_branch(std::string_view name);
inline bool is_sta(Branch b) { return b != Branch::speed_control; }

struct GridSpec {
  std::size_t n_points = 1024;
  double x_min = -20.0;
  double x_max = 20.0;
  bool operator==(const GridSpec&) const = default;
};

enum class InitialKind { gaussian, eigenstate };

struct InitialStateSpec {
  InitialKind kind = InitialKind::gaussian;
  double x0 = 0.0;
  double k0 = 0.0;
  double sigma = 1.0;
  int index = 0;  ///< eigenstate number
  bool operator==(const InitialStateSpec&) const = default;
};

enum class PotentialKind { free, harmonic, anharmonic, box };
enum class FamilyKind { translation, compression };

std::string_view to_string(PotentialKind k);
std::optional<PotentialKind> parse_potential_kind(std::string_view name);
std::string_view to_string(FamilyKind k);
std::optional<FamilyKind> parse_family_kind(std::string_view name);

/// Reference potential. For the speed-control branch the harmonic centre may
/// oscillate as center + drive_amplitude * sin(drive_frequency * t). For the
/// shortcut branches the shape is moved or squeezed by the family transform.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::harmonic;
  double omega = 1.0;
  double center = 0.0;
  double drive_amplitude = 0.0;
  double drive_frequency = 0.0;
  double quartic = 0.0;       ///< anharmonic: + quartic * (x - center)^4
  double half_width = 1.0;    ///< box: walls at center +- half_width
  double depth = 1e6;         ///< box: wall height
  double wall_width = 0.02;   ///< box: logistic wall thickness
  std::optional<FamilyKind> family;  ///< sta-phase-ode only
  bool operator==(const PotentialSpec&) const = default;
};

struct AlphaSpec {
  speed::AlphaKind kind = speed::AlphaKind::constant;
  double reference_duration = 1.0;  ///< T, the length of the reference run
  bool exact_target = true;
  std::optional<double> duration;   ///< T_F
  std::optional<double> value;
  double ramp_fraction = 0.25;
  std::optional<speed::AlphaWindow> window;
  std::vector<double> sample_times, sample_values;
  speed::SampleInterpolation interpolation = speed::SampleInterpolation::cubic_spline;
  bool operator==(const AlphaSpec&) const = default;
};

struct RSpec {
  sta::RKind kind = sta::RKind::quintic;
  double r_initial = 0.0;
  double r_final = 1.0;
  double duration = 1.0;
  std::vector<double> sample_times, sample_values, sample_velocities;
  bool operator==(const RSpec&) const = default;
};

struct LadderRung {
  std::size_t n_points;
  double dt;
  bool operator==(const LadderRung&) const = default;
};

struct NumericsSpec {
  double dt = 1e-4;
  std::optional<double> dt_ref;          ///< defaults to dt
  std::optional<double> node_threshold;  ///< branch default when absent
  double drive_step_fraction = 1.0 / 2000.0;
  std::optional<double> family_step;     ///< default (R_f - R_i) / 1000
  bool omit_auxiliary = false;           ///< control experiment: drop the auxiliary potential
  std::optional<double> scaling_partner_duration;
  std::vector<LadderRung> convergence_ladder;
  bool operator==(const NumericsSpec&) const = default;
};

/// Pass/fail limits; absent limits are not checked.
struct Thresholds {
  std::optional<double> final_fidelity_min;
  std::optional<double> final_fidelity_max;
  std::optional<double> density_l2_max;
  double norm_dev_max = 1e-8;
  std::optional<double> pause_drift_max;
  std::optional<double> reversal_fidelity_min;
  std::optional<double> reference_fidelity_min;  ///< final state vs the recorded reference run
  std::optional<double> phase_oracle_max;
  std::optional<double> scaling_deviation_max;
  std::optional<double> convergence_order_min;
  std::optional<double> convergence_ratio_min;
  bool operator==(const Thresholds&) const = default;
};

struct Scenario {
  std::string name;
  std::string description;
  Branch branch = Branch::speed_control;
  GridSpec grid;
  PhysicalConstants constants;
  InitialStateSpec initial_state;
  PotentialSpec potential;
  std::optional<AlphaSpec> alpha;  ///< speed-control schedule
  std::optional<RSpec> r;          ///< shortcut schedule
  NumericsSpec numerics;
  std::vector<double> checkpoints;  ///< empty: 11 evenly spaced times on [0, T_F]
  Thresholds thresholds;

  bool operator==(const Scenario&) const = default;
};

/// Controlled duration T_F of the scenario's schedule.
double controlled_duration(const Scenario& s);
/// Explicit checkpoints, or the default 11 evenly spaced times including both ends.
std::vector<double> checkpoint_times(const Scenario& s);

speed::AlphaSchedule build_alpha_schedule(const Scenario& s);
sta::RSchedule build_r_schedule(const Scenario& s);

/// Semantic checks beyond the file schema: grid shape, positivity, schedule
/// consistency, checkpoint range, branch/field compatibility. Throws
/// ScenarioError naming the offending key.
void validate_scenario(const Scenario& s);

}  // namespace ffst::harness
