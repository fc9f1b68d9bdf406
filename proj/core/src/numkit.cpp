#include "geotraj/numkit.hpp"

#include <cmath>

namespace geotraj {

double max_abs(const Mat& a) { return a.cwiseAbs().maxCoeff(); }

double unitarity_defect(const Mat& u) {
  Mat d = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  return max_abs(d);
}

bool is_unitary(const Mat& u, double tol) {
  return u.rows() == u.cols() && unitarity_defect(u) < tol;
}

Mat mat_exp(const Mat& a) {
  if (a.rows() != a.cols()) throw DimensionError("mat_exp: matrix must be square");
  if (a.rows() > kMaxDim) throw DimensionError("mat_exp: dim exceeds 32");
  const Eigen::Index n = a.rows();

  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  if (norm > 0.25) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    if (squarings > 60) throw ConvergenceError("mat_exp: norm too large");
  }
  Mat b = a / std::pow(2.0, squarings);

  // Horner evaluation of the 24-term Taylor polynomial; with ||B|| <= 0.25
  // the truncation error is far below double roundoff.
  constexpr int kTerms = 24;
  Mat result = Mat::Identity(n, n);
  for (int k = kTerms; k >= 1; --k) {
    result = Mat::Identity(n, n) + (b * result) / static_cast<double>(k);
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Mat2 exp_minus_i_h2(const Mat2& h, double dt) {
  // H = c0*I + v.sigma; exp(-i H dt) = e^{-i c0 dt}[cos(|v|dt) I - i sin(|v|dt) v^.sigma]
  const Complex h00 = h(0, 0), h11 = h(1, 1), h01 = h(0, 1);
  const double c0 = 0.5 * (h00.real() + h11.real());
  const double vz = 0.5 * (h00.real() - h11.real());
  const double vx = h01.real();
  const double vy = -h01.imag();
  const double r = std::sqrt(vx * vx + vy * vy + vz * vz);
  const double ang = r * dt;
  const double c = std::cos(ang);
  const double s = (r > 0.0) ? std::sin(ang) / r : dt;  // sinc limit
  const Complex phase = std::exp(Complex(0.0, -c0 * dt));
  Mat2 u;
  u(0, 0) = phase * Complex(c, -s * vz);
  u(1, 1) = phase * Complex(c, s * vz);
  u(0, 1) = phase * (-kI * s * Complex(vx, -vy));
  u(1, 0) = phase * (-kI * s * Complex(vx, vy));
  return u;
}

namespace {

void check_hermitian(const Mat& h) {
  const double scale = 1.0 + h.cwiseAbs().maxCoeff();
  if (max_abs(Mat(h - h.adjoint())) > 1e-9 * scale)
    throw ModelError("propagate: Hamiltonian sample is not Hermitian");
}

}  // namespace

Mat propagate(const HamiltonianSampler& h, const TimeGrid& grid) {
  const double dt = grid.dt();
  Mat h0 = h(grid.t_start + 0.5 * dt);
  if (h0.rows() != h0.cols()) throw DimensionError("propagate: non-square sample");
  check_hermitian(h0);
  const Eigen::Index n = h0.rows();

  if (n == 2) {
    Mat2 u = exp_minus_i_h2(Mat2(h0), dt);
    for (int k = 1; k < grid.steps; ++k) {
      const double tm = grid.t_start + (k + 0.5) * dt;
      Mat2 hk(h(tm));
      check_hermitian(hk);
      u = exp_minus_i_h2(hk, dt) * u;
    }
    return u;
  }

  Mat u = mat_exp(Mat(-kI * dt * h0));
  for (int k = 1; k < grid.steps; ++k) {
    const double tm = grid.t_start + (k + 0.5) * dt;
    Mat hk = h(tm);
    check_hermitian(hk);
    u = mat_exp(Mat(-kI * dt * hk)) * u;
  }
  return u;
}

double bessel_j(int m, double x) {
  if (m < 0 || m > 20) throw std::domain_error("bessel_j: order out of [0,20]");
  if (std::abs(x) > 50.0) throw std::domain_error("bessel_j: |x| exceeds 50");
  const double ax = std::abs(x);
  double v = std::cyl_bessel_j(static_cast<double>(m), ax);
  if (x < 0.0 && (m % 2) != 0) v = -v;  // J_m(-x) = (-1)^m J_m(x)
  return v;
}

PhaseDistance distance_up_to_phase_full(const Mat& u, const Mat& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw DimensionError("distance_up_to_phase: dimension mismatch");
  const Complex tr = (u.adjoint() * v).trace();
  PhaseDistance out;
  if (std::abs(tr) < 1e-300) {
    out.phase_free = true;
    out.value = max_abs(Mat(u - v));
    return out;
  }
  const Complex phase = tr / std::abs(tr);
  out.value = max_abs(Mat(u * phase - v));
  return out;
}

double distance_up_to_phase(const Mat& u, const Mat& v) {
  return distance_up_to_phase_full(u, v).value;
}

}  // namespace geotraj
