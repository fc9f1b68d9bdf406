#pragma once

#include <functional>
#include <string>
#include <vector>

#include "geotraj/pulse.hpp"

namespace geotraj {

enum class FidelityConvention { Modulus, RealPart };

// F_U = |Tr(U_target^dag U_actual)| / d  (RealPart takes Re instead of | |).
double gate_fidelity(const Mat& u_target, const Mat& u_actual,
                     FidelityConvention conv = FidelityConvention::Modulus);

struct SensitivityCurve {
  std::string gate_name;
  std::vector<double> delta_grid;
  std::vector<double> infidelity;
};

std::vector<double> default_delta_grid(double max_delta = 0.1, int points = 41);

// Propagates `schedule` with the error injected at each grid point and
// records 1 - F_U against `target`.
SensitivityCurve sensitivity_curve(const PulseSchedule& schedule, const Mat2& target,
                                   ErrorKind kind, const std::vector<double>& grid,
                                   const std::string& name = "",
                                   FidelityConvention conv = FidelityConvention::Modulus,
                                   int base_steps = 2000);

struct DominanceReport {
  std::vector<bool> a_le_b;     // pointwise a <= b (with tolerance)
  bool full_dominance = false;  // a <= b everywhere
  double max_ratio_b_over_a = 0.0;  // max of b/a where a > 0
  double min_ratio_b_over_a = 0.0;  // min of b/a where a > 0
  std::vector<double> crossovers;   // grid points where the order flips
};

DominanceReport compare_curves(const SensitivityCurve& a, const SensitivityCurve& b,
                               double tol = 1e-10);

std::string curve_to_csv(const SensitivityCurve& c);
std::string overlay_to_csv(const SensitivityCurve& a, const SensitivityCurve& b,
                           const std::string& label_a, const std::string& label_b);

}  // namespace geotraj
