#include "ffst/sta/r_schedule.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "ffst/core/errors.hpp"

namespace ffst::sta {

std::string_view to_string(RKind kind) {
  return kind == RKind::quintic ? "quintic" : "custom-samples";
}

std::optional<RKind> parse_r_kind(std::string_view name) {
  if (name == "quintic") return RKind::quintic;
  if (name == "custom-samples") return RKind::custom_samples;
  return std::nullopt;
}

RSchedule RSchedule::quintic(double r_initial, double r_final, double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw InvalidArgument(fmt::format("schedule duration must be positive, got {}", duration));
  if (!std::isfinite(r_initial) || !std::isfinite(r_final))
    throw InvalidArgument("schedule endpoints must be finite");
  RSchedule s;
  s.kind_ = RKind::quintic;
  s.r_i_ = r_initial;
  s.r_f_ = r_final;
  s.duration_ = duration;
  s.r_min_ = std::min(r_initial, r_final);
  s.r_max_ = std::max(r_initial, r_final);
  return s;
}

RSchedule RSchedule::custom_samples(std::vector<double> times, std::vector<double> values,
                                    std::vector<double> velocities) {
  const std::size_t n = times.size();
  if (n < 2 || values.size() != n || velocities.size() != n)
    throw InvalidArgument("custom R samples need >= 2 (t, R, dR/dt) triples of equal length");
  if (times.front() != 0.0) throw InvalidArgument("custom R samples must start at t = 0");
  for (std::size_t k = 1; k < n; ++k)
    if (!(times[k] > times[k - 1]))
      throw InvalidArgument("custom R sample times must be strictly increasing");
  for (std::size_t k = 0; k < n; ++k)
    if (!std::isfinite(values[k]) || !std::isfinite(velocities[k]))
      throw InvalidArgument("custom R samples must be finite");
  if (velocities.front() != 0.0 || velocities.back() != 0.0)
    throw InvalidArgument(fmt::format(
        "custom R samples must satisfy dR/dt(0) = dR/dt(T_F) = 0, got {} and {}",
        velocities.front(), velocities.back()));
  RSchedule s;
  s.kind_ = RKind::custom_samples;
  s.r_i_ = values.front();
  s.r_f_ = values.back();
  s.duration_ = times.back();
  s.times_ = std::move(times);
  s.values_ = std::move(values);
  s.velocities_ = std::move(velocities);
  // Hermite segments can overshoot their knots; scan densely for the range.
  s.r_min_ = s.r_max_ = s.r_i_;
  constexpr int per_segment = 64;
  for (std::size_t k = 0; k + 1 < n; ++k)
    for (int p = 0; p <= per_segment; ++p) {
      const double r = s.value(s.times_[k] + (s.times_[k + 1] - s.times_[k]) * p / per_segment);
      s.r_min_ = std::min(s.r_min_, r);
      s.r_max_ = std::max(s.r_max_, r);
    }
  return s;
}

double RSchedule::clamp_time(double t) const {
  const double tol = 1e-12 * duration_;
  if (!(t >= -tol && t <= duration_ + tol))
    throw InvalidArgument(fmt::format("time {} outside schedule range [0, {}]", t, duration_));
  return std::clamp(t, 0.0, duration_);
}

std::size_t RSchedule::segment(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto k = static_cast<std::size_t>(it - times_.begin());
  return std::clamp<std::size_t>(k, 1, times_.size() - 1) - 1;
}

double RSchedule::value(double t) const {
  t = clamp_time(t);
  if (kind_ == RKind::quintic) {
    const double s = t / duration_;
    return r_i_ + (r_f_ - r_i_) * s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
  }
  const std::size_t k = segment(t);
  const double h = times_[k + 1] - times_[k], u = (t - times_[k]) / h;
  const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u), h10 = u * (1.0 - u) * (1.0 - u);
  const double h01 = u * u * (3.0 - 2.0 * u), h11 = u * u * (u - 1.0);
  return h00 * values_[k] + h10 * h * velocities_[k] + h01 * values_[k + 1] +
         h11 * h * velocities_[k + 1];
}

double RSchedule::velocity(double t) const {
  t = clamp_time(t);
  if (kind_ == RKind::quintic) {
    const double s = t / duration_;
    return (r_f_ - r_i_) / duration_ * 30.0 * s * s * (1.0 - s) * (1.0 - s);
  }
  const std::size_t k = segment(t);
  const double h = times_[k + 1] - times_[k], u = (t - times_[k]) / h;
  const double d00 = 6.0 * u * (u - 1.0), d10 = (1.0 - u) * (1.0 - 3.0 * u);
  const double d01 = -d00, d11 = u * (3.0 * u - 2.0);
  return (d00 * values_[k] + d01 * values_[k + 1]) / h + d10 * velocities_[k] +
         d11 * velocities_[k + 1];
}

double RSchedule::acceleration(double t) const {
  t = clamp_time(t);
  if (kind_ == RKind::quintic) {
    const double s = t / duration_;
    return (r_f_ - r_i_) / (duration_ * duration_) * 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
  }
  const std::size_t k = segment(t);
  const double h = times_[k + 1] - times_[k], u = (t - times_[k]) / h;
  const double a00 = 12.0 * u - 6.0, a10 = 6.0 * u - 4.0, a11 = 6.0 * u - 2.0;
  return (a00 * (values_[k] - values_[k + 1]) / h + a10 * velocities_[k] + a11 * velocities_[k + 1]) / h;
}

double RSchedule::r_min() const { return r_min_; }
double RSchedule::r_max() const { return r_max_; }

RSchedule r_schedule(double r_initial, double r_final, double duration) {
  return RSchedule::quintic(r_initial, r_final, duration);
}

}  // namespace ffst::sta
