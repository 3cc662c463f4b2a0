#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ffst/core/eigensolver.hpp"
#include "ffst/core/errors.hpp"
#include "ffst/speed/ff_drive.hpp"
#include "ffst/speed/phase.hpp"
#include "oracles.hpp"

using namespace ffst;
using namespace ffst::speed;

namespace {

TimeDependentPotential free_potential(const Grid& g) {
  return [g](double) { return PotentialField(g); };
}

TimeDependentPotential harmonic_potential(const Grid& g) {
  PotentialField v(g);
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = 0.5 * g.x(i) * g.x(i);
  return [v](double) { return v; };
}

std::shared_ptr<const ReferenceTrajectory> free_reference(const Grid& g, double k0, double duration,
                                                          double interval, double dt) {
  ReferenceOptions opt;
  opt.sample_interval = interval;
  opt.dt = dt;
  return ReferenceTrajectory::record(gaussian_packet(g, 0.0, k0, 1.0), free_potential(g), duration,
                                     PhysicalConstants{}, opt);
}

}  // namespace

TEST_CASE("lambda for constant schedules") {
  CHECK(AlphaSchedule::constant(2.0, 1.0).lambda(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  const auto identity = AlphaSchedule::constant(1.0, 3.0);
  for (double t : {0.0, 0.3, 1.7, 3.0}) CHECK(identity.lambda(t) == doctest::Approx(t).epsilon(1e-14));
  const auto backward = AlphaSchedule::constant(-1.0, 2.0);
  CHECK(backward.lambda(1.25) == doctest::Approx(-1.25).epsilon(1e-14));
  CHECK(lambda_of(backward)(0.0) == 0.0);
}

TEST_CASE("smooth ramp meets the exact target") {
  AlphaParams p;
  p.reference_duration = 1.0;
  p.duration = 0.5;
  const auto fast = make_alpha_schedule(AlphaKind::smooth_ramp, p);
  CHECK(fast.alpha(0.0) == 1.0);
  CHECK(fast.alpha(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fast.rate(0.0) == doctest::Approx(0.0));
  CHECK(fast.rate(0.5) == doctest::Approx(0.0));
  CHECK(std::abs(fast.final_lambda() - 1.0) <= 1e-10 * 0.5);

  p.duration = 2.0;
  const auto slow = make_alpha_schedule(AlphaKind::smooth_ramp, p);
  for (int k = 0; k <= 200; ++k) {
    const double a = slow.alpha(2.0 * k / 200.0);
    CHECK(a > 0.0);
    CHECK(a <= 1.0);
  }
  CHECK(std::abs(slow.final_lambda() - 1.0) <= 1e-10 * 2.0);

  AlphaParams q;
  q.reference_duration = 1.0;
  q.value = 4.0;
  const auto peak4 = make_alpha_schedule(AlphaKind::smooth_ramp, q);
  double max_alpha = 0.0;
  for (int k = 0; k <= 1000; ++k) max_alpha = std::max(max_alpha, peak4.alpha(peak4.duration() * k / 1000.0));
  CHECK(max_alpha == doctest::Approx(4.0));
  CHECK(peak4.duration() < 0.5);

  AlphaParams bad;
  bad.reference_duration = 1.0;
  bad.duration = 0.5;
  bad.value = 3.0;
  CHECK_THROWS_AS(make_alpha_schedule(AlphaKind::smooth_ramp, bad), InvalidArgument);
}

TEST_CASE("lambda matches dense trapezoid integration for smooth schedules") {
  const auto s = AlphaSchedule::smooth_ramp(2.7, 1.3, 0.3);
  const int n = 200000;
  double acc = 0.0;
  const double h = 1.3 / n;
  for (int k = 0; k < n; ++k) acc += 0.5 * h * (s.alpha(k * h) + s.alpha((k + 1) * h));
  CHECK(std::abs(s.final_lambda() - acc) < 1e-9);
}

TEST_CASE("pause window freezes lambda on its plateau") {
  AlphaParams p;
  p.reference_duration = 1.0;
  p.window = AlphaWindow{0.3, 0.9, 0.1};
  const auto s = make_alpha_schedule(AlphaKind::pause_window, p);
  CHECK(s.duration() == doctest::Approx(1.5));
  CHECK(s.alpha(0.6) == 0.0);
  CHECK(s.lambda(0.4) == doctest::Approx(s.lambda(0.8)).epsilon(1e-13));
  CHECK(s.returns_to_unity());
  CHECK(std::abs(s.final_lambda() - 1.0) < 1e-10);
}

TEST_CASE("reverse window returns lambda to its window-start value") {
  AlphaParams p;
  p.reference_duration = 1.0;
  p.window = AlphaWindow{0.4, 0.8, 0.2};
  const auto s = make_alpha_schedule(AlphaKind::reverse_window, p);
  CHECK(s.alpha(0.6) == doctest::Approx(-1.0));
  CHECK(std::abs(s.lambda(0.8) - s.lambda(0.4)) < 1e-12);
  CHECK(s.lambda(0.7) < s.lambda(0.4));
  CHECK(std::abs(s.final_lambda() - 1.0) < 1e-10);
}

TEST_CASE("custom samples: spline and linear interpolation") {
  auto spline = AlphaSchedule::custom_samples({0.0, 0.5, 1.0}, {1.0, 2.0, 1.0},
                                              SampleInterpolation::cubic_spline);
  CHECK(spline.alpha(0.5) == doctest::Approx(2.0));
  CHECK(spline.differentiable_at(0.5));
  auto linear = AlphaSchedule::custom_samples({0.0, 0.5, 1.0}, {1.0, 2.0, 1.0},
                                              SampleInterpolation::linear);
  CHECK(linear.final_lambda() == doctest::Approx(1.5).epsilon(1e-13));
  CHECK_FALSE(linear.differentiable_at(0.5));
  CHECK_THROWS_AS((void)linear.rate(0.5), InvalidArgument);
}

TEST_CASE("extract_phase of plane-wave, real, and nodal states") {
  const Grid g = make_grid(1024, -20, 20);
  const auto moving = gaussian_packet(g, 0.0, 2.0, 1.0);
  const auto pf = extract_phase(moving, 1e-6 * std::sqrt(moving.density()[g.nearest_index(0.0)]));
  double worst = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i)
    if (pf.valid[i] && pf.valid[i - 1])
      worst = std::max(worst, std::abs((pf.phase[i] - pf.phase[i - 1]) / g.dx() - 2.0));
  CHECK(worst < 1e-8);

  const auto real = gaussian_packet(g, 0.0, 0.0, 1.0);
  const auto pr = extract_phase(real, 1e-6);
  for (double ph : pr.phase) CHECK(ph == 0.0);

  const auto excited = oracle::harmonic_first_excited(g);
  const auto pe = extract_phase(excited, 1e-6);
  CHECK_FALSE(pe.valid[g.nearest_index(0.0)]);
  CHECK(pe.valid[g.nearest_index(1.0)]);
  CHECK(pe.valid[g.nearest_index(-1.0)]);
  const double left = pe.phase[g.nearest_index(-1.0)], right = pe.phase[g.nearest_index(1.0)];
  CHECK(std::abs(std::abs(left - right) - std::numbers::pi) < 1e-12);

  CHECK_THROWS_AS(extract_phase(excited, 0.7), NodeDominated);
}

TEST_CASE("additional phase arithmetic") {
  const std::vector<double> eta{-1.0, 0.0, 0.5, 2.0};
  for (double f : additional_phase(1.0, eta)) CHECK(f == 0.0);
  const auto three = additional_phase(3.0, eta);
  for (std::size_t i = 0; i < eta.size(); ++i) CHECK(three[i] == 2.0 * eta[i]);
  const auto rev = additional_phase(-1.0, eta);
  for (std::size_t i = 0; i < eta.size(); ++i) CHECK(rev[i] == -2.0 * eta[i]);
}

TEST_CASE("ff_wavefunction keeps the amplitude") {
  const Grid g = make_grid(256, -10, 10);
  const auto psi = gaussian_packet(g, 0.5, 1.0, 1.0);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::sin(g.x(i));
  const auto ff = ff_wavefunction(psi, f);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(ff[i]) == doctest::Approx(std::abs(psi[i])).epsilon(1e-15));
  const auto same = ff_wavefunction(psi, std::vector<double>(g.size(), 0.0));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(same[i] == psi[i]);
}

TEST_CASE("reference trajectory reconstructs its samples") {
  const Grid g = make_grid(512, -20, 20);
  const auto ref = free_reference(g, 1.0, 0.5, 0.01, 0.01);
  CHECK(ref->sample_count() == 51);
  for (std::size_t j = 0; j < ref->sample_count(); j += 10) {
    const auto s = ref->phase_sample(j);
    WaveFunction rebuilt(g);
    for (std::size_t i = 0; i < g.size(); ++i) rebuilt[i] = std::polar(s.amplitude[i], s.phase[i]);
    CHECK(fidelity(rebuilt, ref->sample(j)) >= 1.0 - 1e-10);
    for (double a : s.amplitude) CHECK(a >= 0.0);
  }
  // Interpolated states land on the analytic solution.
  const auto mid = ref->state_at(0.237);
  CHECK(fidelity(mid, oracle::free_gaussian(g, 0.0, 1.0, 1.0, 0.237)) >= 1.0 - 1e-10);
  CHECK_THROWS_AS(ref->state_at(0.6), InvalidArgument);
  CHECK_THROWS_AS(ref->state_at(-0.1), InvalidArgument);
}

TEST_CASE("phase rate of a free Gaussian matches the analytic phase") {
  // eta(x, t) = k0 x - k0^2 t / 2 + (x - k0 t)^2 t / (8 (1 + t^2/4)) + uniform(t)
  const Grid g = make_grid(1024, -20, 20);
  const double k0 = 1.0;
  const auto ref = free_reference(g, k0, 1.0, 1e-3, 1e-3);
  auto shape_rate = [&](double x, double t) {
    const double d = x - k0 * t, q = 1.0 + 0.25 * t * t;
    return -k0 * k0 / 2.0 - 2.0 * d * k0 * t / (8.0 * q) + d * d * (1.0 - 0.25 * t * t) / (8.0 * q * q);
  };
  for (double lambda : {0.0, 0.3337, 0.5, 1.0}) {
    const auto ph = ref->phase_at(lambda);
    const std::size_t i0 = g.nearest_index(k0 * lambda);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.x(i);
      if (std::abs(x - k0 * lambda) > 4.0) continue;
      const double expected = shape_rate(x, lambda) - shape_rate(g.x(i0), lambda);
      worst = std::max(worst, std::abs(ph.phase_rate[i] - ph.phase_rate[i0] - expected));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("identity schedule reproduces the reference potential exactly") {
  const Grid g = make_grid(256, -10, 10);
  auto v0 = harmonic_potential(g);
  ReferenceOptions opt;
  opt.sample_interval = 0.05;
  opt.dt = 0.01;
  const auto ref = ReferenceTrajectory::record(gaussian_packet(g, 1.0, 0.5, 1.0), v0, 1.0,
                                               PhysicalConstants{}, opt);
  const SpeedControlDrive drive(ref, AlphaSchedule::constant(1.0, 1.0));
  for (double t : {0.0, 0.123, 0.5, 1.0}) {
    const auto v = drive.potential(t);
    const auto expected = v0(t);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(v[i] == expected[i]);
    const auto ev = drive.evaluate(t);
    for (double f : ev.phase) CHECK(f == 0.0);
  }
  const auto psi = drive.ff_wavefunction(0.5);
  const auto direct = ref->state_at(0.5);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(psi[i] == direct[i]);
}

TEST_CASE("real reference state leaves only the reference potential") {
  const Grid g = make_grid(256, -10, 10);
  auto v0 = harmonic_potential(g);
  const auto ground = solve_eigenstates(v0(0.0), 1, PhysicalConstants{}).front().state;
  ReferenceOptions opt;
  opt.sample_interval = 0.05;
  opt.dt = 1e-3;
  const auto ref = ReferenceTrajectory::record(ground, v0, 1.0, PhysicalConstants{}, opt);
  // The stationary state still picks up a uniform phase exp(-i E t); it only
  // shifts V_FF by a constant, so compare spatial shapes. The splitting error
  // of the reference run (order dt^2) leaves a small residual phase motion.
  const SpeedControlDrive drive(ref, AlphaSchedule::constant(0.5, 2.0));
  const auto v = drive.potential(1.0);
  const auto expected = v0(0.5);
  const std::size_t c = g.nearest_index(0.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g.x(i)) < 5.0) worst = std::max(worst, std::abs((v[i] - v[c]) - (expected[i] - expected[c])));
  CHECK(worst < 1e-5);
}

TEST_CASE("kinked schedules are rejected by the driving potential") {
  const Grid g = make_grid(128, -10, 10);
  const auto ref = free_reference(g, 0.0, 1.0, 0.05, 0.05);
  auto kinked = AlphaSchedule::custom_samples({0.0, 0.5, 1.0}, {1.0, 1.2, 1.0},
                                              SampleInterpolation::linear);
  CHECK_THROWS_AS(ff_potential(*ref, kinked, 0.5), InvalidArgument);
  CHECK_NOTHROW(ff_potential(*ref, kinked, 0.25));
  CHECK_THROWS_AS(SpeedControlDrive(ref, AlphaSchedule::constant(3.0, 1.0)), InvalidArgument);
}

TEST_CASE("constant acceleration of a free Gaussian tracks the reference at twice the time") {
  const Grid g = make_grid(1024, -20, 20);
  const auto ref = free_reference(g, 0.0, 1.0, 1e-3, 1e-4);
  const SpeedControlDrive drive(ref, AlphaSchedule::constant(2.0, 0.5));
  const auto times = std::vector<double>{0.125, 0.25, 0.5};
  const auto states = propagate_to_times(gaussian_packet(g, 0.0, 0.0, 1.0), drive.as_potential(),
                                         0.0, times, 1e-4, PhysicalConstants{});
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto expected = oracle::free_gaussian(g, 0.0, 0.0, 1.0, 2.0 * times[k]);
    CHECK(density_l2_error(states[k], expected) <= 1e-4);
    CHECK(fidelity(states[k], drive.ff_wavefunction(times[k])) >= 1.0 - 1e-6);
  }
}
