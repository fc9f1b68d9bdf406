#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "geotraj/fidelity.hpp"
#include "geotraj/geo.hpp"

// Grid scan of the free 5-segment waypoints (chi1, chi3) for minimum error
// sensitivity. Each (chi1, chi3) admits several pulse-level implementations
// of the same gate -- the geometric phase can be taken as gamma_g or
// gamma_g + pi (same single-qubit gate up to global phase) and the latitude
// span has a 2*pi-shifted alternate -- and their robustness differs by orders
// of magnitude, so every cell is scored by its best implementation.

namespace geotraj {

enum class ScanMetric {
  SymmetricMax,  // max of the infidelity at +/- delta_probe
  OneSided,      // single probe at +delta_probe
  MeanAbs,       // mean of the infidelity at +/- delta_probe
};

struct ScanSettings {
  double resolution = 0.01 * kPi;
  double fine_resolution = 0.0;  // > 0 adds a refinement pass around the pick
  ErrorKind error_kind = ErrorKind::Detuning;
  double delta_probe = 0.1;
  ScanMetric metric = ScanMetric::SymmetricMax;
  // Optimal-region selection: among cells within region_band * min(metric),
  // prefer the smallest total pulse area (shortest gate).
  double region_band = 1.2;
  double omega_max = 1.0;
  Envelope envelope = Envelope::Square;
  int base_steps = 2000;
  int threads = 1;
};

// Which of the degenerate implementations realizes the gate.
struct BranchChoice {
  bool gamma_plus_pi = false;   // synthesize gamma_g + pi instead of gamma_g
  bool alternate_span = false;  // take the 2*pi-shifted latitude span
};

struct RobustSynthesis {
  FiveSegmentResult synth;
  BranchChoice branch;
  double metric = std::numeric_limits<double>::quiet_NaN();
};

// Best implementation of (p, chi1, chi3): minimizes the probe metric over the
// branch choices, skipping degenerate (zero-span) variants. Throws when no
// variant is feasible.
RobustSynthesis synth_five_segment_robust(const GateParams& p, double chi1, double chi3,
                                          const ScanSettings& s);

struct Landscape {
  std::vector<double> chi1_grid;
  std::vector<double> chi3_grid;
  // metric(i, j) = best-implementation infidelity for (chi1_grid[i],
  // chi3_grid[j]); NaN marks an infeasible cell (singular drift / degenerate
  // loop). area(i, j) is the matching total pulse area.
  Eigen::MatrixXd metric;
  Eigen::MatrixXd area;
  GateParams gate;
  double delta_probe = 0.1;
};

struct Optimum {
  double chi1 = 0.0;
  double chi3 = 0.0;
  double metric = std::numeric_limits<double>::quiet_NaN();
  double area = std::numeric_limits<double>::quiet_NaN();
};

// Grid over [lo, hi]; points landing on the singular chi = pi/2 are nudged by
// half a step.
std::vector<double> scan_grid(double lo, double hi, double resolution);

Landscape scan_landscape(const GateParams& p, const ScanSettings& s);

// Smallest-area cell within region_band of the landscape minimum; exact ties
// broken lexicographically by (chi1, chi3).
Optimum select_optimum(const Landscape& l, double region_band = 1.2);

struct OptimizeResult {
  Landscape coarse;
  Optimum best;
};

// Scan + select; when fine_resolution > 0 the neighborhood of the pick is
// re-scanned at the fine step and the selection repeated over the union.
OptimizeResult optimize_waypoints(const GateParams& p, const ScanSettings& s);

// 4-segment correction scan over the free waypoint chi2 in [chi0, pi].
struct Chi2Scan {
  std::vector<double> chi2_grid;
  std::vector<double> metric;  // NaN = infeasible
  double best_chi2 = 0.0;
  double best_metric = std::numeric_limits<double>::quiet_NaN();
};
Chi2Scan scan_four_segment(const GateParams& p, const ScanSettings& s);

std::string landscape_to_csv(const Landscape& l);

}  // namespace geotraj
