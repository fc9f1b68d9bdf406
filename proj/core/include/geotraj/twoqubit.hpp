#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "geotraj/fidelity.hpp"
#include "geotraj/geo.hpp"
#include "geotraj/optimizer.hpp"
#include "geotraj/transmon.hpp"

// Two capacitively coupled transmons with a parametric modulation of the
// first qubit's frequency, omega_1(t) = omega_1 + eps * sin(nu t + phi).
// The interaction Hamiltonian carries Bessel-weighted sidebands; picking the
// modulation frequency near a subspace resonance yields an effective
// two-level model on {|01>,|10>} (iSWAP) or {|02>,|11>} (CZ) that the
// geometric synthesizer can drive.

namespace geotraj {

struct TwoQubitParams {
  double g = 2.0 * kPi * 8.0;        // transmon-transmon coupling, rad/us
  double delta1 = 2.0 * kPi * 500.0; // omega_2 - omega_1, rad/us
  double alpha1 = 2.0 * kPi * 320.0; // anharmonicity of Q1
  double alpha2 = 2.0 * kPi * 280.0; // anharmonicity of Q2
  int m_cutoff = 7;                  // sideband truncation |m| <= m_cutoff

  void validate() const;
};

struct ModulationParams {
  double nu = 0.0;   // modulation frequency, rad/us
  double beta = 0.0; // eps / nu
  double phi = 0.0;  // modulation phase

  double eps() const { return beta * nu; }
  void validate() const;
};

enum class SubspaceKind { SingleExcitation, TwoExcitation };
enum class TwoQubitGate { iSWAP, CZ };

TwoQubitGate two_qubit_gate_from_string(const std::string& name);
std::string to_string(TwoQubitGate g);

struct SubspaceSelect {
  SubspaceKind kind = SubspaceKind::SingleExcitation;
  double delta_s = 0.0;  // residual detuning from exact resonance

  // Resonance condition: nu = delta1 + delta_s (single excitation) or
  // nu = delta1 - alpha2 + delta_s (two excitation).
  double resonant_nu(const TwoQubitParams& p) const;
  // g' = factor * g * J1(beta), factor 2 or 2*sqrt(2).
  double coupling_factor() const;
  void validate(const TwoQubitParams& p) const;  // |delta_s| < nu / 10
};

double effective_coupling(const TwoQubitParams& p, const SubspaceSelect& sub, double beta);
// Inverse of the above on beta in (0, first J1 maximum]; throws
// ParameterError when g_prime exceeds the attainable coupling.
double beta_for_coupling(const TwoQubitParams& p, const SubspaceSelect& sub, double g_prime);

// Interaction Hamiltonian at time t in the 5-state basis
// {|01>,|10>,|02>,|11>,|20>} with sidebands summed over |m| <= m_cutoff.
Mat build_interaction_hamiltonian(const TwoQubitParams& p, const ModulationParams& m,
                                  double t);

// --- modulation programs -----------------------------------------------------

// Piecewise-linear modulation-phase program; beta is constant within a
// segment (square envelopes make g' time-constant).
struct ModulationSegment {
  double duration = 0.0;
  double beta = 0.0;
  double phi0 = 0.0;       // modulation phase at the segment start
  double phi_slope = 0.0;  // d phi / dt
};

struct ModulationProgram {
  double nu = 0.0;  // design (resonant) modulation frequency
  SubspaceKind subspace = SubspaceKind::SingleExcitation;
  std::vector<ModulationSegment> segments;

  double total_time() const;
  double phi(double t) const;
  double beta(double t) const;
};

// Invert the effective-model correspondence (Omega -> g', Delta -> Delta',
// phi -> phi' = (Delta_s - Delta') t + phi - pi/2) segment by segment: the
// emitted phase program realizes the schedule's phi(t) in the rotating frame
// accumulating Theta(t) = int Delta' dt. Requires square envelopes.
ModulationProgram effective_two_level(const TwoQubitParams& p, const SubspaceSelect& sub,
                                      const PulseSchedule& schedule);

// --- gate synthesis ----------------------------------------------------------

struct TwoQubitSynthesis {
  ModulationProgram program;
  PulseSchedule effective;  // two-level schedule with omega_max = g'
  TrajectorySpec trajectory;
  GateParams gate;          // effective-subspace gate parameters as synthesized
  BranchChoice branch;      // implementation picked by the robustness probe
  SubspaceKind subspace = SubspaceKind::SingleExcitation;
  Mat target;               // 4x4 computational-basis target
  Mat2 target_sub;          // effective two-level target
};

// 5-segment geometric construction: iSWAP from (chi0, xi0, gamma_g) =
// (pi/2, 0, pi/2) in the single-excitation subspace, CZ from (0, 0, pi) in
// the two-excitation subspace (chi1 is forced to the pole for CZ). Unlike the
// single-qubit case the subspace phase is physical here, so only
// implementations reproducing the target unitary exactly are admitted:
// gamma_g + pi paired with xi0 + pi (iSWAP) and the 2*pi-shifted latitude
// spans. Among those the one with the smallest max infidelity at
// delta' = +/- 0.1 is synthesized.
TwoQubitSynthesis synth_two_qubit_geo(TwoQubitGate gate, double chi1, double chi3,
                                      const TwoQubitParams& p, double beta = 1.2);

// Conventional counterpart: one constant-phase resonant segment in the same
// subspace, area pi (iSWAP) or 2*pi (CZ).
TwoQubitSynthesis synth_two_qubit_conventional(TwoQubitGate gate, const TwoQubitParams& p,
                                               double beta = 1.2);

// Embed an effective-subspace propagator into the 4x4 computational basis
// {|00>,|01>,|10>,|11>} (amplitudes leaving the subspace drop out).
Mat embed_computational(SubspaceKind kind, const Mat2& u_sub);

// Effective-model infidelity versus the fractional detuning error delta'
// (injected as Delta' -> Delta' + delta' g'), embedded 4x4 fidelity. Curves
// use sine envelopes for both constructions: a constant-amplitude 2*pi pulse
// is quartically flat in the detuning error, an artifact of the square shape
// that the pulse-shaped comparison removes.
SensitivityCurve sensitivity_two_qubit(TwoQubitGate gate, double chi1, double chi3,
                                       const std::vector<double>& grid,
                                       int base_steps = 2000);
SensitivityCurve sensitivity_two_qubit_conventional(TwoQubitGate gate,
                                                    const std::vector<double>& grid,
                                                    int base_steps = 2000);

// Effective-model (chi1, chi3) landscape with the embedded 4x4 fidelity;
// cells are scored by their best exact-target implementation under the
// settings' probe metric and envelope. The single-probe (one-sided) metric at
// delta' = +0.1 is the recommended scoring for these maps.
Landscape scan_two_qubit_landscape(TwoQubitGate gate, const ScanSettings& s);

// --- full model --------------------------------------------------------------

struct FullSimSettings {
  double t1 = 50.0;        // both transmons, us (inf = closed system)
  double tphi = 50.0;
  double dt_factor = 0.12; // step = dt_factor / nu
  long max_steps = 4000000;
  bool resonant_only = false;  // keep only the m = -1 resonant sideband
};

// Propagate 6x6 operators (basis {|00>,|01>,|10>,|02>,|11>,|20>}) under the
// full sideband Hamiltonian at modulation frequency nu plus both-transmon
// dissipation. Inputs need not be Hermitian; the map is applied elementwise
// to each operator in `rho0s`.
std::vector<Mat> evolve_full(const TwoQubitSynthesis& syn, const TwoQubitParams& p,
                             double nu, const std::vector<Mat>& rho0s,
                             const FullSimSettings& s);

// State-average fidelity over the 16 two-qubit cardinal product states,
// maximized over the residual single-qubit Z phases (which absorb the
// rotating-frame mismatch at the final time).
double simulate_full(TwoQubitGate gate, double chi1, double chi3, const TwoQubitParams& p,
                     double nu, double beta, const FullSimSettings& s);

struct NuBetaScan {
  std::vector<double> nu_grid;
  std::vector<double> beta_grid;
  Eigen::MatrixXd fidelity;  // nu x beta
  double best_fidelity = 0.0;
  double best_nu = 0.0;
  double best_beta = 0.0;
};

// Fidelity map over the modulation parameters, nu within +/- nu_halfwidth of
// the subspace resonance and beta in [beta_lo, beta_hi].
NuBetaScan scan_nu_beta(TwoQubitGate gate, double chi1, double chi3,
                        const TwoQubitParams& p, const FullSimSettings& s,
                        int nu_points = 41, int beta_points = 33,
                        double nu_halfwidth = 2.0 * kPi * 20.0, double beta_lo = 0.2,
                        double beta_hi = 1.8, int threads = 1);

std::string scan_to_csv(const NuBetaScan& scan);  // `nu,beta,fidelity`

}  // namespace geotraj
