#pragma once

#include <string>
#include <vector>

#include "geotraj/errors.hpp"
#include "geotraj/numkit.hpp"

// Piecewise pulse schedules driving the two-level Hamiltonian
//   H(t) = 1/2 [[-Delta, Omega e^{-i phi}], [Omega e^{i phi}, Delta]],
// plus the conventional (resonant, constant-phase) gate synthesizer.

namespace geotraj {

enum class Envelope { Sine, Square };

struct PulseSegment {
  double duration = 0.0;  // time
  double area = 0.0;      // \int Omega dt over the segment, radians, >= 0
  Envelope envelope = Envelope::Sine;
  // phi(t) = phi_base + slope_factor * A(t), A(t) the area accumulated since
  // the segment start. slope_factor = 0 gives a constant drive phase.
  double phi_base = 0.0;
  double slope_factor = 0.0;
  // Delta(t) = detune_factor * Omega(t).
  double detune_factor = 0.0;

  bool degenerate() const { return area == 0.0; }
};

struct PulseSample {
  double omega = 0.0;      // physical drive amplitude (error-adjusted)
  double domega_dt = 0.0;  // envelope derivative (error-adjusted)
  double phi = 0.0;
  double dphi_dt = 0.0;    // phase-ramp rate slope_factor * Omega (nominal)
  double delta = 0.0;      // error-adjusted detuning
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;
  double omega_max = 1.0;  // peak Rabi frequency Omega_m (angular frequency)
  // DRAG correction, set by drag_correct (drag_alpha = 0 disables): quadrature
  // -drag_quad * dOmega/dt / gap and detuning shift
  // +drag_stark * Omega^2 / (2 gap), both with the local leakage gap
  // gap(t) = drag_alpha - Delta(t) - dphi/dt.
  double drag_alpha = 0.0;
  double drag_quad = 0.0;
  double drag_stark = 0.0;

  double total_time() const;
  double total_area() const;
  bool empty() const { return segments.empty(); }

  // Segment boundary times tau_0 = 0 < tau_1 < ... < tau (degenerate segments
  // contribute zero width).
  std::vector<double> boundaries() const;

  PulseSample sample(double t, const ErrorModel& err = {}) const;
};

// Quadrature drive component and detuning shift of a schedule's DRAG
// correction at one sample; both zero when no correction is set.
struct DragTerms {
  double quad = 0.0;
  double delta_shift = 0.0;
};
DragTerms drag_terms(const PulseSchedule& s, const PulseSample& p);

// Segment duration for a given area at fixed peak amplitude.
double segment_duration(double area, Envelope env, double omega_max);

PulseSegment make_segment(double area, Envelope env, double omega_max,
                          double phi_base, double slope_factor, double detune_factor);

// Eq.-1 Hamiltonian sample with errors injected. A schedule carrying a DRAG
// correction gets the quadrature and detuning-shift terms applied under the
// same drive phase.
Mat2 sample_hamiltonian(const PulseSchedule& s, double t, const ErrorModel& err = {});

HamiltonianSampler hamiltonian_sampler(const PulseSchedule& s, const ErrorModel& err = {});

// Integrator resolution for this schedule: steps for each segment, sized from
// the default per-segment count plus the phase winding of latitude segments.
std::vector<int> integration_steps(const PulseSchedule& s, int base_steps = 2000);

// Time-ordered propagator of the full schedule.
Mat2 propagate_schedule(const PulseSchedule& s, const ErrorModel& err = {}, int base_steps = 2000);

// --- conventional gates ------------------------------------------------------

struct ConventionalGateSpec {
  double theta_c = 0.0;  // rotation angle, >= 0
  double phi_c = 0.0;
};

// Closed form of the resonant evolution operator.
Mat2 conventional_unitary(const ConventionalGateSpec& spec);

// Single resonant segment of area theta_c at constant phase phi_c.
PulseSchedule synth_conventional(const ConventionalGateSpec& spec, double omega_max,
                                 Envelope env = Envelope::Sine);

enum class GateName { I, H, Xpi, Ypi, Xpi2, Ypi2, mXpi2, mYpi2 };

GateName gate_name_from_string(const std::string& name);
std::string to_string(GateName g);

// Decomposition into X/Y rotations; entries listed in application order
// (first entry acts first).
std::vector<ConventionalGateSpec> conventional_composite(GateName name);

PulseSchedule synth_conventional_composite(GateName name, double omega_max,
                                           Envelope env = Envelope::Sine);

// Concatenate b after a (same omega_max required).
PulseSchedule concat(const PulseSchedule& a, const PulseSchedule& b);

// --- serialization -----------------------------------------------------------

std::string schedule_to_json(const PulseSchedule& s);
PulseSchedule schedule_from_json(const std::string& text);

// CSV `t,omega,phi,delta` sampled on the integrator grid.
std::string schedule_to_csv(const PulseSchedule& s, int base_steps = 2000);

}  // namespace geotraj
