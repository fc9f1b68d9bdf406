#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geotraj/pulse.hpp"

// Geometric machinery: Bloch-sphere trajectories built from longitude and
// latitude arcs, the closed-form cyclic-evolution gate, and the synthesizer
// that turns a closed trajectory into a pulse schedule whose propagator
// reproduces that gate with zero dynamical phase.

namespace geotraj {

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateLoopError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SingularDriftError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct TopologyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// (chi0, xi0) locate the start of the cyclic trajectory on the Bloch sphere;
// gamma_g is the geometric phase the loop accumulates.
struct GateParams {
  double chi0 = 0.0;  // [0, pi]
  double xi0 = 0.0;
  double gamma_g = 0.0;

  void validate() const;
};

enum class SegmentKind { Longitude, Latitude };

struct Waypoint {
  double chi = 0.0;
  double xi = 0.0;
};

struct TrajectorySpec {
  // Closed loop: first waypoint equals the last (xi compared mod 2*pi; at the
  // poles xi only labels the meridian).
  std::vector<Waypoint> waypoints;

  size_t segment_count() const { return waypoints.empty() ? 0 : waypoints.size() - 1; }
  SegmentKind kind(size_t i) const;
  void validate_closed() const;
};

// Closed-form 2x2 gate of a cyclic trajectory.
Mat2 gate_unitary(const GateParams& p);

enum class RotationAxis { X, Y };
enum class PhaseBranch { Principal, PlusPi };  // gamma_g = theta/2 or theta/2 + pi

GateParams gate_params_for(RotationAxis axis, double angle, PhaseBranch branch = PhaseBranch::Principal);

// Gate parameters for the named single-qubit gates.
GateParams geometric_gate_params(GateName g);

// Sum over latitude arcs of -(d xi)(1 - cos chi)/2.
double geometric_phase(const TrajectorySpec& traj);
double wrap_angle(double a);  // reduce to (-pi, pi]

// --- trajectory builders -----------------------------------------------------

// 5-segment loop: longitude chi0->chi1, latitude at chi1, longitude
// chi1->chi3, latitude at chi3, longitude chi3->chi0. The latitude span is
// solved from gamma_g; of the 2*pi-shifted solutions the shortest is taken
// (set `alternate` for the next-shortest).
TrajectorySpec five_segment_trajectory(const GateParams& p, double chi1, double chi3,
                                       bool alternate = false);

// 4-segment loop with free waypoint chi2: longitude chi0->chi2, latitude at
// chi2, longitude chi2->north pole, meridian jump, longitude back to chi0.
// chi2 = pi reduces it to the fixed 3-segment (orange-slice) loop.
TrajectorySpec four_segment_trajectory(const GateParams& p, double chi2);
TrajectorySpec three_segment_trajectory(const GateParams& p);

// Single latitude circle of span d_xi at fixed chi0.
TrajectorySpec latitude_loop(double chi0, double xi0, double d_xi);

// --- synthesis ---------------------------------------------------------------

// Pulse settings for an alternating longitude/latitude closed loop:
// longitudes get constant phase xi -+ pi/2 and zero detuning; latitudes get a
// phase drifting linearly in accumulated area with slope 1/(sin chi cos chi)
// and detuning -Omega tan chi, with the branch signs chosen so every pulse
// area is strictly positive. Latitude arcs at the poles become zero-duration
// frame jumps.
PulseSchedule synth_trajectory(const TrajectorySpec& traj, double omega_max,
                               Envelope env = Envelope::Sine);

struct FiveSegmentResult {
  PulseSchedule schedule;
  TrajectorySpec trajectory;
};

FiveSegmentResult synth_five_segment(const GateParams& p, double chi1, double chi3,
                                     double omega_max, Envelope env = Envelope::Sine,
                                     bool alternate = false);

// --- diagnostics -------------------------------------------------------------

// chi = 2 atan2(|c1|, |c0|), xi = arg(c1) - arg(c0); xi := 0 at the poles.
std::pair<double, double> bloch_coordinates(const Vec2& state);

// Evolution state at the loop start, |Psi1(0)>.
Vec2 evolution_state(const GateParams& p);

// Numerical  -int <Psi1|H|Psi1> dt  along the propagated state.
double dynamical_phase_check(const PulseSchedule& s, const GateParams& p,
                             int base_steps = 2000);

// Overall phase picked up by |Psi1> over the loop, arg<Psi1(0)|U|Psi1(0)>.
double overall_phase(const PulseSchedule& s, const GateParams& p, int base_steps = 2000);

// Bloch coordinates of the propagated |Psi1> at each segment boundary.
std::vector<std::pair<double, double>> boundary_coordinates(const PulseSchedule& s,
                                                            const GateParams& p,
                                                            int base_steps = 2000);

// CSV `segment,kind,chi,xi_start,xi_end,area,detune_factor`.
std::string trajectory_to_csv(const TrajectorySpec& traj);

}  // namespace geotraj
