#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>

// Dense complex linear-algebra kernels, time-ordered propagation and the
// special functions shared by the physics modules. Everything here is pure;
// matrices are plain Eigen values and can be moved freely between threads.

namespace geotraj {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Largest matrix dimension the kernels accept. Keeps the dense algorithms
// in their comfortable accuracy/performance regime.
inline constexpr int kMaxDim = 32;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double max_abs(const Mat& a);

// ||U^dag U - I||_max
double unitarity_defect(const Mat& u);
bool is_unitary(const Mat& u, double tol = 1e-8);

// exp(A) by scaling-and-squaring with a truncated Taylor kernel.
// Relative accuracy ~1e-13 for dim <= 32.
Mat mat_exp(const Mat& a);

// Closed-form exp(-i*H*dt) for a Hermitian 2x2 H.
Mat2 exp_minus_i_h2(const Mat2& h, double dt);

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  int steps = 1;

  TimeGrid(double t0, double t1, int n) : t_start(t0), t_end(t1), steps(n) {
    if (!(t_end > t_start) && n > 0 && t_end != t_start)
      throw DimensionError("TimeGrid: t_end must exceed t_start");
    if (steps < 1) throw DimensionError("TimeGrid: step count must be >= 1");
  }
  double dt() const { return (t_end - t_start) / steps; }
};

using HamiltonianSampler = std::function<Mat(double)>;

// Time-ordered propagator U = T exp(-i \int H dt), exponential midpoint rule.
// Samples are checked for Hermiticity; the result is unitary by construction.
Mat propagate(const HamiltonianSampler& h, const TimeGrid& grid);

// Bessel function of the first kind J_m(x), m in [0,20], |x| <= 50.
double bessel_j(int m, double x);

struct PhaseDistance {
  double value = 0.0;
  // True when Tr(U^dag V) vanished and no phase alignment was possible.
  bool phase_free = false;
};

// min over global phase theta of ||e^{i theta} U - V||_max.
PhaseDistance distance_up_to_phase_full(const Mat& u, const Mat& v);
double distance_up_to_phase(const Mat& u, const Mat& v);

}  // namespace geotraj
