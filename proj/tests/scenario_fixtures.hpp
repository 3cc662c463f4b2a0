#pragma once

// Scenario values shared by the harness and CLI tests.

#include "ffst/harness/scenario.hpp"

namespace fixtures {

using namespace ffst;
using namespace ffst::harness;

inline Scenario free_gaussian(double k0 = 1.0) {
  Scenario s;
  s.name = "free-gaussian";
  s.branch = Branch::speed_control;
  s.initial_state = {InitialKind::gaussian, 0.0, k0, 1.0, 0};
  s.potential.kind = PotentialKind::free;
  s.numerics.dt = 1e-4;
  s.numerics.dt_ref = 1e-3;
  return s;
}

inline Scenario acceleration() {
  Scenario s = free_gaussian();
  s.name = "acceleration";
  AlphaSpec a;
  a.kind = speed::AlphaKind::smooth_ramp;
  a.reference_duration = 1.0;
  a.duration = 0.5;
  s.alpha = a;
  // Below the default mask the frozen tails put a ~2e-7 floor under the
  // error, which would hide the time-step convergence.
  s.numerics.node_threshold = 1e-8;
  s.thresholds.final_fidelity_min = 0.999;
  return s;
}

inline Scenario deceleration() {
  Scenario s = acceleration();
  s.name = "deceleration";
  s.alpha->duration = 2.0;
  return s;
}

inline Scenario pause() {
  Scenario s = free_gaussian();
  s.name = "pause";
  AlphaSpec a;
  a.kind = speed::AlphaKind::pause_window;
  a.exact_target = false;
  a.reference_duration = 1.0;
  a.duration = 1.0;
  a.window = speed::AlphaWindow{0.3, 0.7, 0.1};
  s.alpha = a;
  s.thresholds.pause_drift_max = 1e-3;
  return s;
}

inline Scenario reversal() {
  Scenario s = pause();
  s.name = "reversal";
  s.alpha->kind = speed::AlphaKind::reverse_window;
  // Ramps spanning half the window make the backward leg cancel the forward one.
  s.alpha->window = speed::AlphaWindow{0.3, 0.7, 0.2};
  s.thresholds.pause_drift_max.reset();
  s.thresholds.reversal_fidelity_min = 0.999;
  return s;
}

inline Scenario identity() {
  Scenario s = free_gaussian();
  s.name = "identity";
  s.potential.kind = PotentialKind::harmonic;
  s.potential.drive_amplitude = 1.0;
  s.potential.drive_frequency = 2.0;
  AlphaSpec a;
  a.kind = speed::AlphaKind::constant;
  a.value = 1.0;
  a.duration = 1.0;
  a.reference_duration = 1.0;
  s.alpha = a;
  s.numerics.dt_ref.reset();
  s.thresholds.reference_fidelity_min = 1.0 - 1e-10;
  return s;
}

inline Scenario transport() {
  Scenario s;
  s.name = "transport";
  s.branch = Branch::sta_transport;
  s.initial_state.kind = InitialKind::eigenstate;
  s.potential.kind = PotentialKind::harmonic;
  s.r = RSpec{sta::RKind::quintic, 0.0, 5.0, 2.0, {}, {}, {}};
  s.thresholds.final_fidelity_min = 0.999;
  return s;
}

inline Scenario compression() {
  Scenario s = transport();
  s.name = "compression";
  s.branch = Branch::sta_compression;
  s.r = RSpec{sta::RKind::quintic, 1.0, 4.0, 1.0, {}, {}, {}};
  return s;
}

inline Scenario phase_ode(int index = 0) {
  Scenario s = transport();
  s.name = "phase-ode";
  s.branch = Branch::sta_phase_ode;
  s.potential.family = FamilyKind::translation;
  s.initial_state.index = index;
  return s;
}

}  // namespace fixtures
