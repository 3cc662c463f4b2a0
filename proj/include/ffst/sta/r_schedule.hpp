#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace ffst::sta {

enum class RKind { quintic, custom_samples };

std::string_view to_string(RKind kind);
std::optional<RKind> parse_r_kind(std::string_view name);

/// Control parameter R(t) on [0, T_F] with R(0) = R_i, R(T_F) = R_f and
/// vanishing velocity at both ends.
///
/// The quintic kind R_i + (R_f - R_i) S(t/T_F), S(s) = 10s^3 - 15s^4 + 6s^5,
/// also has zero acceleration at the ends. The custom kind takes (t, R, dR/dt)
/// triples and interpolates them with cubic Hermite segments; its acceleration
/// is piecewise linear.
class RSchedule {
 public:
  static RSchedule quintic(double r_initial, double r_final, double duration);
  static RSchedule custom_samples(std::vector<double> times, std::vector<double> values,
                                  std::vector<double> velocities);

  RKind kind() const noexcept { return kind_; }
  double r_initial() const noexcept { return r_i_; }
  double r_final() const noexcept { return r_f_; }
  double duration() const noexcept { return duration_; }

  double value(double t) const;
  double velocity(double t) const;
  double acceleration(double t) const;

  /// Smallest and largest R reached on [0, T_F].
  double r_min() const;
  double r_max() const;

 private:
  RSchedule() = default;
  double clamp_time(double t) const;
  std::size_t segment(double t) const;

  RKind kind_ = RKind::quintic;
  double r_i_ = 0.0, r_f_ = 0.0, duration_ = 1.0;
  std::vector<double> times_, values_, velocities_;
  double r_min_ = 0.0, r_max_ = 0.0;
};

/// Builds a quintic schedule, checking T_F > 0 and finite endpoints.
RSchedule r_schedule(double r_initial, double r_final, double duration);

}  // namespace ffst::sta
