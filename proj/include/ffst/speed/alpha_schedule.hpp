#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ffst/core/numerics.hpp"

namespace ffst::speed {

enum class AlphaKind { constant, smooth_ramp, pause_window, reverse_window, custom_samples };
enum class SampleInterpolation { cubic_spline, linear };

std::string_view to_string(AlphaKind kind);
std::optional<AlphaKind> parse_alpha_kind(std::string_view name);

/// Time window [start, end] during which a pause/reverse schedule departs from 1.
/// The departure ramps in and out over `ramp` with a C2 quintic smoothstep.
struct AlphaWindow {
  double start;
  double end;
  double ramp;
  double plateau_start() const { return start + ramp; }
  double plateau_end() const { return end - ramp; }
  bool operator==(const AlphaWindow&) const = default;
};

/// Parameters accepted by make_alpha_schedule. Unused fields are ignored for a kind.
struct AlphaParams {
  std::optional<double> duration;  ///< controlled duration T_F
  std::optional<double> value;     ///< constant alpha, or the plateau value of a smooth ramp
  double ramp_fraction = 0.25;     ///< smooth ramp: each ramp lasts ramp_fraction * T_F
  std::optional<AlphaWindow> window;
  std::vector<double> sample_times;
  std::vector<double> sample_values;
  SampleInterpolation interpolation = SampleInterpolation::cubic_spline;
  /// Exact-target request: the schedule must satisfy Lambda(T_F) = reference_duration
  /// and alpha(0) = alpha(T_F) = 1. Missing duration/value are solved for.
  std::optional<double> reference_duration;
};

/// Speed-control factor alpha(t) on [0, T_F] together with its integral
/// Lambda(t) = int_0^t alpha.
///
///  - constant:        alpha = value
///  - smooth_ramp:     1 -> value -> 1 through C2 quintic ramps, flat in between
///  - pause_window:    alpha = 1 - W(t), stopped (alpha = 0) on the window plateau
///  - reverse_window:  alpha = 1 - 2 W(t), running backward where W > 1/2
///  - custom_samples:  natural cubic spline (or piecewise linear) through samples
///
/// Lambda is integrated piecewise with 8-point Gauss-Legendre, which is exact for
/// every built-in kind.
class AlphaSchedule {
 public:
  static AlphaSchedule constant(double alpha, double duration);
  static AlphaSchedule smooth_ramp(double peak, double duration, double ramp_fraction = 0.25);
  static AlphaSchedule pause_window(double duration, AlphaWindow window);
  static AlphaSchedule reverse_window(double duration, AlphaWindow window);
  static AlphaSchedule custom_samples(std::vector<double> times, std::vector<double> values,
                                      SampleInterpolation interpolation);

  AlphaKind kind() const noexcept { return kind_; }
  double duration() const noexcept { return duration_; }

  double alpha(double t) const;
  /// d alpha / dt. Throws InvalidArgument where the schedule has a kink.
  double rate(double t) const;
  bool differentiable_at(double t) const;

  double lambda(double t) const;
  double final_lambda() const { return lambda(duration_); }
  /// alpha(0) = alpha(T_F) = 1, so the additional phase vanishes at both ends.
  bool returns_to_unity() const;

  const std::optional<AlphaWindow>& window() const noexcept { return window_; }
  std::span<const double> breakpoints() const noexcept { return breaks_; }

 private:
  AlphaSchedule(AlphaKind kind, double duration);
  void finalize();
  double clamp_time(double t) const;
  double shape(double t) const;
  double shape_rate(double t) const;

  AlphaKind kind_;
  double duration_;
  double value_ = 1.0;
  double ramp_ = 0.0;
  double depth_ = 0.0;
  std::optional<AlphaWindow> window_;
  std::optional<CubicSpline> spline_;
  std::vector<double> sample_times_, sample_values_;
  SampleInterpolation interpolation_ = SampleInterpolation::cubic_spline;
  std::vector<double> breaks_;
  std::vector<double> cumulative_;  // Lambda at each breakpoint
};

AlphaSchedule make_alpha_schedule(AlphaKind kind, const AlphaParams& params);

/// t -> Lambda(t) for the schedule.
std::function<double(double)> lambda_of(const AlphaSchedule& schedule);

}  // namespace ffst::speed
