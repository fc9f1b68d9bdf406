#include "geotraj/fidelity.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace geotraj {

double gate_fidelity(const Mat& u_target, const Mat& u_actual, FidelityConvention conv) {
  if (u_target.rows() != u_actual.rows() || u_target.cols() != u_actual.cols())
    throw DimensionError("gate_fidelity: dimension mismatch");
  const Complex tr = (u_target.adjoint() * u_actual).trace();
  const double d = static_cast<double>(u_target.rows());
  return conv == FidelityConvention::Modulus ? std::abs(tr) / d : tr.real() / d;
}

std::vector<double> default_delta_grid(double max_delta, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = points == 1 ? 0.0 : -max_delta + 2.0 * max_delta * i / (points - 1);
  return g;
}

SensitivityCurve sensitivity_curve(const PulseSchedule& schedule, const Mat2& target,
                                   ErrorKind kind, const std::vector<double>& grid,
                                   const std::string& name, FidelityConvention conv,
                                   int base_steps) {
  SensitivityCurve c;
  c.gate_name = name;
  c.delta_grid = grid;
  c.infidelity.reserve(grid.size());
  for (double q : grid) {
    ErrorModel err;
    switch (kind) {
      case ErrorKind::Detuning: err.delta = q; break;
      case ErrorKind::Amplitude: err.epsilon = q; break;
      case ErrorKind::ZZ: err.zeta = q; break;
    }
    const Mat2 u = propagate_schedule(schedule, err, base_steps);
    c.infidelity.push_back(1.0 - gate_fidelity(target, u, conv));
  }
  return c;
}

DominanceReport compare_curves(const SensitivityCurve& a, const SensitivityCurve& b,
                               double tol) {
  if (a.delta_grid.size() != b.delta_grid.size())
    throw std::invalid_argument("compare_curves: grid mismatch");
  for (size_t i = 0; i < a.delta_grid.size(); ++i)
    if (a.delta_grid[i] != b.delta_grid[i])
      throw std::invalid_argument("compare_curves: grid mismatch");

  DominanceReport r;
  r.full_dominance = true;
  bool have_ratio = false;
  for (size_t i = 0; i < a.infidelity.size(); ++i) {
    const bool le = a.infidelity[i] <= b.infidelity[i] + tol;
    r.a_le_b.push_back(le);
    if (!le) r.full_dominance = false;
    if (i > 0 && r.a_le_b[i] != r.a_le_b[i - 1])
      r.crossovers.push_back(a.delta_grid[i]);
    if (a.infidelity[i] > tol) {
      const double ratio = b.infidelity[i] / a.infidelity[i];
      if (!have_ratio) {
        r.max_ratio_b_over_a = r.min_ratio_b_over_a = ratio;
        have_ratio = true;
      } else {
        r.max_ratio_b_over_a = std::max(r.max_ratio_b_over_a, ratio);
        r.min_ratio_b_over_a = std::min(r.min_ratio_b_over_a, ratio);
      }
    }
  }
  return r;
}

std::string curve_to_csv(const SensitivityCurve& c) {
  std::string out = "delta,infidelity\n";
  char line[80];
  for (size_t i = 0; i < c.delta_grid.size(); ++i) {
    std::snprintf(line, sizeof line, "%.12g,%.12g\n", c.delta_grid[i], c.infidelity[i]);
    out += line;
  }
  return out;
}

std::string overlay_to_csv(const SensitivityCurve& a, const SensitivityCurve& b,
                           const std::string& label_a, const std::string& label_b) {
  std::string out = "delta," + label_a + "," + label_b + "\n";
  char line[120];
  for (size_t i = 0; i < a.delta_grid.size(); ++i) {
    std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", a.delta_grid[i],
                  a.infidelity[i], b.infidelity[i]);
    out += line;
  }
  return out;
}

}  // namespace geotraj
