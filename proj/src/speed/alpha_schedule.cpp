#include "ffst/speed/alpha_schedule.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"

namespace ffst::speed {
namespace {

// C2 quintic smoothstep: S(0)=0, S(1)=1, S' and S'' vanish at both ends.
double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep_rate(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidArgument(fmt::format("{} must be positive, got {}", what, v));
}

void require_window(const AlphaWindow& w, double duration) {
  if (!(w.start >= 0.0) || !(w.end <= duration) || !(w.end > w.start))
    throw InvalidArgument(fmt::format("window [{}, {}] must lie inside [0, {}]", w.start, w.end,
                                      duration));
  if (!(w.ramp > 0.0) || w.ramp > 0.5 * (w.end - w.start) * (1.0 + 1e-12))
    throw InvalidArgument(fmt::format("window ramp {} must be in (0, (end-start)/2]", w.ramp));
}

}  // namespace

std::string_view to_string(AlphaKind kind) {
  switch (kind) {
    case AlphaKind::constant: return "constant";
    case AlphaKind::smooth_ramp: return "smooth-ramp";
    case AlphaKind::pause_window: return "pause-window";
    case AlphaKind::reverse_window: return "reverse-window";
    case AlphaKind::custom_samples: return "custom-samples";
  }
  return "unknown";
}

std::optional<AlphaKind> parse_alpha_kind(std::string_view name) {
  for (auto k : {AlphaKind::constant, AlphaKind::smooth_ramp, AlphaKind::pause_window,
                 AlphaKind::reverse_window, AlphaKind::custom_samples})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

AlphaSchedule::AlphaSchedule(AlphaKind kind, double duration) : kind_(kind), duration_(duration) {
  require_positive(duration, "schedule duration");
}

AlphaSchedule AlphaSchedule::constant(double alpha, double duration) {
  if (!std::isfinite(alpha)) throw InvalidArgument("constant alpha must be finite");
  AlphaSchedule s(AlphaKind::constant, duration);
  s.value_ = alpha;
  s.breaks_ = {0.0, duration};
  s.finalize();
  return s;
}

AlphaSchedule AlphaSchedule::smooth_ramp(double peak, double duration, double ramp_fraction) {
  if (!std::isfinite(peak)) throw InvalidArgument("smooth-ramp peak must be finite");
  if (!(ramp_fraction > 0.0) || ramp_fraction > 0.5)
    throw InvalidArgument(fmt::format("ramp_fraction must be in (0, 0.5], got {}", ramp_fraction));
  AlphaSchedule s(AlphaKind::smooth_ramp, duration);
  s.value_ = peak;
  s.ramp_ = ramp_fraction * duration;
  s.breaks_ = {0.0, s.ramp_, duration - s.ramp_, duration};
  s.finalize();
  return s;
}

AlphaSchedule AlphaSchedule::pause_window(double duration, AlphaWindow window) {
  require_window(window, duration);
  AlphaSchedule s(AlphaKind::pause_window, duration);
  s.window_ = window;
  s.depth_ = 1.0;
  s.breaks_ = {0.0, window.start, window.plateau_start(), window.plateau_end(), window.end, duration};
  s.finalize();
  return s;
}

AlphaSchedule AlphaSchedule::reverse_window(double duration, AlphaWindow window) {
  require_window(window, duration);
  AlphaSchedule s(AlphaKind::reverse_window, duration);
  s.window_ = window;
  s.depth_ = 2.0;
  s.breaks_ = {0.0, window.start, window.plateau_start(), window.plateau_end(), window.end, duration};
  s.finalize();
  return s;
}

AlphaSchedule AlphaSchedule::custom_samples(std::vector<double> times, std::vector<double> values,
                                            SampleInterpolation interpolation) {
  if (times.size() < 2 || times.size() != values.size())
    throw InvalidArgument("custom-samples needs >= 2 (time, alpha) pairs of equal length");
  if (times.front() != 0.0) throw InvalidArgument("custom-samples must start at t = 0");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidArgument("custom-samples alpha values must be finite");
  AlphaSchedule s(AlphaKind::custom_samples, times.back());
  s.spline_.emplace(times, values);
  s.interpolation_ = interpolation;
  s.sample_times_ = std::move(times);
  s.sample_values_ = std::move(values);
  s.breaks_ = s.sample_times_;
  s.finalize();
  return s;
}

void AlphaSchedule::finalize() {
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
  cumulative_.assign(breaks_.size(), 0.0);
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    cumulative_[i] = cumulative_[i - 1] +
                     gauss_legendre([this](double t) { return alpha(t); }, breaks_[i - 1], breaks_[i]);
}

double AlphaSchedule::clamp_time(double t) const {
  const double tol = 1e-12 * duration_;
  if (!(t >= -tol && t <= duration_ + tol))
    throw InvalidArgument(fmt::format("time {} outside schedule range [0, {}]", t, duration_));
  return std::clamp(t, 0.0, duration_);
}

// Departure profile in [0, 1] for ramps and windows.
double AlphaSchedule::shape(double t) const {
  if (kind_ == AlphaKind::smooth_ramp) {
    if (t < ramp_) return smoothstep(t / ramp_);
    if (t > duration_ - ramp_) return smoothstep((duration_ - t) / ramp_);
    return 1.0;
  }
  const auto& w = *window_;
  if (t <= w.start || t >= w.end) return 0.0;
  if (t < w.plateau_start()) return smoothstep((t - w.start) / w.ramp);
  if (t > w.plateau_end()) return smoothstep((w.end - t) / w.ramp);
  return 1.0;
}

double AlphaSchedule::shape_rate(double t) const {
  if (kind_ == AlphaKind::smooth_ramp) {
    if (t < ramp_) return smoothstep_rate(t / ramp_) / ramp_;
    if (t > duration_ - ramp_) return -smoothstep_rate((duration_ - t) / ramp_) / ramp_;
    return 0.0;
  }
  const auto& w = *window_;
  if (t <= w.start || t >= w.end) return 0.0;
  if (t < w.plateau_start()) return smoothstep_rate((t - w.start) / w.ramp) / w.ramp;
  if (t > w.plateau_end()) return -smoothstep_rate((w.end - t) / w.ramp) / w.ramp;
  return 0.0;
}

double AlphaSchedule::alpha(double t) const {
  t = clamp_time(t);
  switch (kind_) {
    case AlphaKind::constant: return value_;
    case AlphaKind::smooth_ramp: return 1.0 + (value_ - 1.0) * shape(t);
    case AlphaKind::pause_window:
    case AlphaKind::reverse_window: return 1.0 - depth_ * shape(t);
    case AlphaKind::custom_samples:
      if (interpolation_ == SampleInterpolation::cubic_spline) return spline_->value(t);
      {
        const auto it = std::upper_bound(sample_times_.begin(), sample_times_.end(), t);
        const auto i = std::min<std::size_t>(
            it == sample_times_.begin() ? 0 : static_cast<std::size_t>(it - sample_times_.begin()) - 1,
            sample_times_.size() - 2);
        const double u = (t - sample_times_[i]) / (sample_times_[i + 1] - sample_times_[i]);
        return (1.0 - u) * sample_values_[i] + u * sample_values_[i + 1];
      }
  }
  return 1.0;
}

bool AlphaSchedule::differentiable_at(double t) const {
  if (kind_ != AlphaKind::custom_samples || interpolation_ != SampleInterpolation::linear)
    return true;
  for (std::size_t i = 1; i + 1 < sample_times_.size(); ++i) {
    if (t != sample_times_[i]) continue;
    const double left = (sample_values_[i] - sample_values_[i - 1]) / (sample_times_[i] - sample_times_[i - 1]);
    const double right = (sample_values_[i + 1] - sample_values_[i]) / (sample_times_[i + 1] - sample_times_[i]);
    if (left != right) return false;
  }
  return true;
}

double AlphaSchedule::rate(double t) const {
  t = clamp_time(t);
  if (!differentiable_at(t))
    throw InvalidArgument(fmt::format(
        "d(alpha)/dt is undefined at the kink t={}; use a smooth (cubic-spline) schedule", t));
  switch (kind_) {
    case AlphaKind::constant: return 0.0;
    case AlphaKind::smooth_ramp: return (value_ - 1.0) * shape_rate(t);
    case AlphaKind::pause_window:
    case AlphaKind::reverse_window: return -depth_ * shape_rate(t);
    case AlphaKind::custom_samples:
      if (interpolation_ == SampleInterpolation::cubic_spline) return spline_->derivative(t);
      {
        const auto it = std::upper_bound(sample_times_.begin(), sample_times_.end(), t);
        const auto i = std::min<std::size_t>(
            it == sample_times_.begin() ? 0 : static_cast<std::size_t>(it - sample_times_.begin()) - 1,
            sample_times_.size() - 2);
        return (sample_values_[i + 1] - sample_values_[i]) / (sample_times_[i + 1] - sample_times_[i]);
      }
  }
  return 0.0;
}

double AlphaSchedule::lambda(double t) const {
  t = clamp_time(t);
  if (kind_ == AlphaKind::constant) return value_ * t;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  std::size_t i = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
  if (i + 1 >= breaks_.size()) return cumulative_.back();
  if (t == breaks_[i]) return cumulative_[i];
  return cumulative_[i] + gauss_legendre([this](double s) { return alpha(s); }, breaks_[i], t);
}

bool AlphaSchedule::returns_to_unity() const {
  return std::abs(alpha(0.0) - 1.0) <= 1e-12 && std::abs(alpha(duration_) - 1.0) <= 1e-12;
}

AlphaSchedule make_alpha_schedule(AlphaKind kind, const AlphaParams& p) {
  const auto& target = p.reference_duration;
  if (target) require_positive(*target, "reference_duration");

  auto check_target = [&](const AlphaSchedule& s) {
    if (!target) return s;
    if (!s.returns_to_unity())
      throw InvalidArgument("exact-target schedules need alpha(0) = alpha(T_F) = 1");
    const double lam = s.final_lambda();
    if (std::abs(lam - *target) > 1e-9 * *target)
      throw InvalidArgument(fmt::format(
          "schedule reaches Lambda(T_F) = {:.12g} but the reference duration is {:.12g}", lam,
          *target));
    return s;
  };

  switch (kind) {
    case AlphaKind::constant: {
      if (target) {
        const double value = p.value.value_or(1.0);
        const double duration = p.duration.value_or(*target / value);
        return check_target(AlphaSchedule::constant(value, duration));
      }
      if (!p.duration || !p.value) throw InvalidArgument("constant schedule needs duration and value");
      return AlphaSchedule::constant(*p.value, *p.duration);
    }
    case AlphaKind::smooth_ramp: {
      // Lambda(T_F) = T_F (1 + (peak - 1)(1 - ramp_fraction))
      const double plateau = 1.0 - p.ramp_fraction;
      if (target && p.duration && !p.value) {
        const double peak = 1.0 + (*target / *p.duration - 1.0) / plateau;
        return check_target(AlphaSchedule::smooth_ramp(peak, *p.duration, p.ramp_fraction));
      }
      if (target && p.value && !p.duration) {
        const double denom = 1.0 + (*p.value - 1.0) * plateau;
        if (!(denom > 0.0)) throw InvalidArgument("smooth-ramp peak never reaches the target");
        return check_target(AlphaSchedule::smooth_ramp(*p.value, *target / denom, p.ramp_fraction));
      }
      if (!p.duration || !p.value)
        throw InvalidArgument("smooth-ramp needs duration and value (or an exact target)");
      return check_target(AlphaSchedule::smooth_ramp(*p.value, *p.duration, p.ramp_fraction));
    }
    case AlphaKind::pause_window:
    case AlphaKind::reverse_window: {
      if (!p.window) throw InvalidArgument("window schedules need a window");
      const double depth = kind == AlphaKind::pause_window ? 1.0 : 2.0;
      const auto& w = *p.window;
      double duration = 0.0;
      if (p.duration) duration = *p.duration;
      else if (target) duration = *target + depth * (w.end - w.start - w.ramp);
      else throw InvalidArgument("window schedules need a duration (or an exact target)");
      auto s = kind == AlphaKind::pause_window ? AlphaSchedule::pause_window(duration, w)
                                               : AlphaSchedule::reverse_window(duration, w);
      return check_target(s);
    }
    case AlphaKind::custom_samples:
      return check_target(
          AlphaSchedule::custom_samples(p.sample_times, p.sample_values, p.interpolation));
  }
  throw InvalidArgument("unknown schedule kind");
}

std::function<double(double)> lambda_of(const AlphaSchedule& schedule) {
  return [schedule](double t) { return schedule.lambda(t); };
}

}  // namespace ffst::speed
