#pragma once

#include <string>
#include <vector>

#include "geotraj/geo.hpp"
#include "geotraj/optimizer.hpp"
#include "geotraj/pulse.hpp"

// Single-transmon model: qubit dynamics plus leakage levels, first-order DRAG
// correction and Lindblad decoherence.
//
// Units: angular frequencies in rad/us, times in us (so 2*pi*320 MHz enters
// as 2*pi*320 rad/us).

namespace geotraj {

struct TransmonParams {
  int levels = 4;
  double alpha1 = 2.0 * kPi * 320.0;  // anharmonicity, rad/us
  double t1 = 50.0;                   // relaxation time, us (inf = off)
  double tphi = 50.0;                 // pure dephasing time, us (inf = off)

  void validate() const;
  bool closed_system() const;
};

struct DragSettings {
  bool enabled = false;
  double scale = 0.9;        // quadrature term weight, in [0, 2]
  double stark_scale = 1.4;  // detuning-shift term weight, in [0, 2]
};

// Qubit block plus the leakage ladder: diagonal [(2n-1)Delta - n(n-1)alpha]/2
// for n >= 2 and sqrt(n) couplings under the same drive. Requires levels >= 3.
Mat build_full_hamiltonian(const PulseSchedule& s, const TransmonParams& p, double t,
                           const ErrorModel& err = {});

// First-order DRAG against the local |1> -> |2> gap
// gap(t) = alpha1 - Delta(t) - dphi/dt: quadrature drive component
// -scale * dOmega/dt / gap plus the detuning shift
// +stark_scale * Omega^2 / (2 gap) compensating the level-repulsion (AC
// Stark) phase. Requires sine envelopes (square edges are not
// differentiable).
PulseSchedule drag_correct(const PulseSchedule& s, const TransmonParams& p,
                           const DragSettings& drag);

// Truncated lowering operator with sqrt(n) weights.
Mat lowering_operator(int levels);

// Fixed-step RK4 on d rho/dt = -i[H, rho] + sum_k D[L_k] rho with
// L_1 = a / sqrt(T1) and L_phi = sqrt(2/T_phi) a^dag a.
Mat lindblad_evolve(const Mat& rho0, const HamiltonianSampler& h, const TransmonParams& p,
                    const TimeGrid& grid);

// Average over the six cardinal qubit states of <psi_t| rho |psi_t>, with the
// target state embedded in the truncated level space (leakage counts as
// error, no renormalization).
double gate_fidelity_open(const PulseSchedule& s, const Mat2& target,
                          const TransmonParams& p);

struct OmegaSweep {
  std::vector<double> omega_grid;
  std::vector<double> infidelity_nodrag;
  std::vector<double> infidelity_drag;
};

// Implementation choice (gamma_g + pi / alternate latitude span) with the
// best open-system fidelity at the reference amplitude; the ranking is
// amplitude-insensitive across a sweep range.
BranchChoice transmon_best_branch(const GateParams& gate, double chi1, double chi3,
                                  const TransmonParams& p, double omega_ref,
                                  const DragSettings& drag);

// Gate infidelity versus peak Rabi frequency, with and without DRAG. The
// schedule is re-synthesized per grid point from the trajectory waypoints,
// using the transmon_best_branch implementation at the mid-sweep amplitude.
OmegaSweep omega_sweep(const GateParams& gate, double chi1, double chi3,
                       const TransmonParams& p, const std::vector<double>& omega_grid,
                       const DragSettings& drag, int threads = 1);

std::string sweep_to_csv(const OmegaSweep& sweep);

// Integration step count for this schedule/level count.
int lindblad_steps(const PulseSchedule& s, const TransmonParams& p);

}  // namespace geotraj
