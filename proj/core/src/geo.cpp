#include "geotraj/geo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace geotraj {

namespace {
constexpr double kPoleTol = 1e-12;
constexpr double kSingularCos = 1e-9;
}  // namespace

void GateParams::validate() const {
  if (chi0 < 0.0 || chi0 > kPi) throw ParameterError("chi0 must lie in [0, pi]");
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

SegmentKind TrajectorySpec::kind(size_t i) const {
  const Waypoint& a = waypoints.at(i);
  const Waypoint& b = waypoints.at(i + 1);
  const bool chi_moves = std::abs(b.chi - a.chi) > kPoleTol;
  const bool xi_moves = std::abs(b.xi - a.xi) > kPoleTol;
  if (chi_moves && xi_moves)
    throw TopologyError("trajectory segment changes both chi and xi");
  return chi_moves ? SegmentKind::Longitude : SegmentKind::Latitude;
}

void TrajectorySpec::validate_closed() const {
  if (waypoints.size() < 2) throw TopologyError("trajectory needs at least two waypoints");
  const Waypoint& a = waypoints.front();
  const Waypoint& b = waypoints.back();
  if (std::abs(a.chi - b.chi) > 1e-9) throw TopologyError("trajectory is not closed");
  const bool at_pole = a.chi < kPoleTol || a.chi > kPi - kPoleTol;
  if (!at_pole && std::abs(wrap_angle(a.xi - b.xi)) > 1e-9)
    throw TopologyError("trajectory is not closed");
  for (const auto& w : waypoints)
    if (w.chi < -kPoleTol || w.chi > kPi + kPoleTol)
      throw TopologyError("waypoint chi outside [0, pi]");
}

Mat2 gate_unitary(const GateParams& p) {
  p.validate();
  const double cg = std::cos(p.gamma_g), sg = std::sin(p.gamma_g);
  const double cc = std::cos(p.chi0), sc = std::sin(p.chi0);
  Mat2 u;
  u(0, 0) = Complex(cg, sg * cc);
  u(1, 1) = Complex(cg, -sg * cc);
  u(0, 1) = kI * sg * sc * std::exp(Complex(0.0, -p.xi0));
  u(1, 0) = kI * sg * sc * std::exp(Complex(0.0, p.xi0));
  return u;
}

GateParams gate_params_for(RotationAxis axis, double angle, PhaseBranch branch) {
  GateParams p;
  p.chi0 = 0.5 * kPi;
  const bool negative = angle < 0.0;
  if (axis == RotationAxis::X) {
    p.xi0 = negative ? 0.0 : kPi;
  } else {
    p.xi0 = negative ? 0.5 * kPi : -0.5 * kPi;
  }
  p.gamma_g = 0.5 * std::abs(angle);
  if (branch == PhaseBranch::PlusPi) p.gamma_g += kPi;
  return p;
}

GateParams geometric_gate_params(GateName g) {
  switch (g) {
    case GateName::I: return gate_params_for(RotationAxis::X, 2.0 * kPi);
    case GateName::H: return {0.25 * kPi, 0.0, 0.5 * kPi};
    case GateName::Xpi: return gate_params_for(RotationAxis::X, kPi);
    case GateName::Ypi: return gate_params_for(RotationAxis::Y, kPi);
    case GateName::Xpi2: return gate_params_for(RotationAxis::X, 0.5 * kPi);
    case GateName::Ypi2: return gate_params_for(RotationAxis::Y, 0.5 * kPi);
    case GateName::mXpi2: return gate_params_for(RotationAxis::X, -0.5 * kPi);
    case GateName::mYpi2: return gate_params_for(RotationAxis::Y, -0.5 * kPi);
  }
  throw ParameterError("unknown gate");
}

double geometric_phase(const TrajectorySpec& traj) {
  traj.validate_closed();
  double g = 0.0;
  for (size_t i = 0; i < traj.segment_count(); ++i) {
    if (traj.kind(i) != SegmentKind::Latitude) continue;
    const double dxi = traj.waypoints[i + 1].xi - traj.waypoints[i].xi;
    g += -0.5 * dxi * (1.0 - std::cos(traj.waypoints[i].chi));
  }
  return g;
}

namespace {

// Latitude span solving gamma_g = span * weight, shortest 2*pi branch first.
// Zero spans (gamma_g a multiple of 2*pi folding to an empty arc) are not
// loops at all and are skipped. When two spans tie in magnitude (gamma_g a
// multiple of pi) the positive one is primary and its mirror is the alternate.
double solve_span(double gamma_g, double weight, bool alternate) {
  if (std::abs(weight) < 1e-12) throw DegenerateLoopError("latitude weight vanishes");
  std::vector<double> spans;
  for (int k = -3; k <= 3; ++k) {
    const double span = (gamma_g + 2.0 * kPi * k) / weight;
    if (std::abs(span) > 1e-12) spans.push_back(span);
  }
  if (spans.empty()) throw DegenerateLoopError("no non-trivial latitude span");
  std::sort(spans.begin(), spans.end(), [](double a, double b) {
    if (std::abs(std::abs(a) - std::abs(b)) > 1e-12) return std::abs(a) < std::abs(b);
    return a > b;
  });
  if (!alternate) return spans.front();
  if (spans.size() < 2) throw DegenerateLoopError("no alternate latitude span");
  return spans[1];
}

}  // namespace

TrajectorySpec five_segment_trajectory(const GateParams& p, double chi1, double chi3,
                                       bool alternate) {
  p.validate();
  if (!(chi1 >= -kPoleTol && chi1 <= p.chi0 + kPoleTol && chi3 >= p.chi0 - kPoleTol &&
        chi3 <= kPi + kPoleTol))
    throw ParameterError("need 0 <= chi1 <= chi0 <= chi3 <= pi");
  const double weight = 0.5 * (std::cos(chi1) - std::cos(chi3));
  if (std::abs(weight) < 1e-9)
    throw DegenerateLoopError("cos(chi1) == cos(chi3): loop encloses no solid angle");
  const double xi2 = p.xi0 + solve_span(p.gamma_g, weight, alternate);
  TrajectorySpec t;
  t.waypoints = {{p.chi0, p.xi0}, {chi1, p.xi0}, {chi1, xi2},
                 {chi3, xi2},     {chi3, p.xi0}, {p.chi0, p.xi0}};
  return t;
}

TrajectorySpec four_segment_trajectory(const GateParams& p, double chi2) {
  p.validate();
  if (!(chi2 >= p.chi0 - kPoleTol && chi2 <= kPi + kPoleTol))
    throw ParameterError("need chi0 <= chi2 <= pi");
  const double weight = -0.5 * (1.0 - std::cos(chi2));
  const double xi2 = p.xi0 + solve_span(p.gamma_g, weight, false);
  TrajectorySpec t;
  t.waypoints = {{p.chi0, p.xi0}, {chi2, p.xi0}, {chi2, xi2},
                 {0.0, xi2},      {0.0, p.xi0},  {p.chi0, p.xi0}};
  return t;
}

TrajectorySpec three_segment_trajectory(const GateParams& p) {
  return four_segment_trajectory(p, kPi);
}

TrajectorySpec latitude_loop(double chi0, double xi0, double d_xi) {
  TrajectorySpec t;
  t.waypoints = {{chi0, xi0}, {chi0, xi0 + d_xi}};
  return t;
}

namespace {

struct SegmentPlan {
  SegmentKind kind;
  double chi;       // latitude only
  double xi_start;
  double xi_end;
  double area;
  double phi_base;
  double slope;
  double detune;
};

std::vector<SegmentPlan> plan_trajectory(const TrajectorySpec& traj) {
  traj.validate_closed();
  std::vector<SegmentPlan> plans;
  for (size_t i = 0; i < traj.segment_count(); ++i) {
    const Waypoint& a = traj.waypoints[i];
    const Waypoint& b = traj.waypoints[i + 1];
    SegmentPlan sp{};
    sp.xi_start = a.xi;
    sp.xi_end = b.xi;
    if (traj.kind(i) == SegmentKind::Longitude) {
      sp.kind = SegmentKind::Longitude;
      sp.chi = a.chi;
      sp.area = std::abs(b.chi - a.chi);
      // phi - xi = -pi/2 moves toward the north pole, +pi/2 away from it.
      sp.phi_base = a.xi + (b.chi > a.chi ? 0.5 * kPi : -0.5 * kPi);
      sp.slope = 0.0;
      sp.detune = 0.0;
    } else {
      sp.kind = SegmentKind::Latitude;
      sp.chi = a.chi;
      const double dxi = b.xi - a.xi;
      const bool at_pole = a.chi < kPoleTol || a.chi > kPi - kPoleTol;
      if (at_pole || std::abs(dxi) < kPoleTol) {
        sp.area = 0.0;  // frame jump / no-op
      } else {
        const double s = std::sin(a.chi), c = std::cos(a.chi);
        if (std::abs(c) < kSingularCos)
          throw SingularDriftError("latitude at the equator: phase-drift slope diverges");
        const double signed_area = dxi * s * c;
        if (signed_area > 0.0) {
          sp.area = signed_area;            // phi = pi + xi(t)
          sp.phi_base = a.xi + kPi;
          sp.slope = 1.0 / (s * c);
          sp.detune = -std::tan(a.chi);
        } else {
          sp.area = -signed_area;           // phi = xi(t)
          sp.phi_base = a.xi;
          sp.slope = -1.0 / (s * c);
          sp.detune = std::tan(a.chi);
        }
      }
    }
    plans.push_back(sp);
  }
  return plans;
}

}  // namespace

PulseSchedule synth_trajectory(const TrajectorySpec& traj, double omega_max, Envelope env) {
  PulseSchedule s;
  s.omega_max = omega_max;
  for (const auto& sp : plan_trajectory(traj)) {
    s.segments.push_back(
        make_segment(sp.area, env, omega_max, sp.phi_base, sp.slope, sp.detune));
  }
  return s;
}

FiveSegmentResult synth_five_segment(const GateParams& p, double chi1, double chi3,
                                     double omega_max, Envelope env, bool alternate) {
  FiveSegmentResult out;
  out.trajectory = five_segment_trajectory(p, chi1, chi3, alternate);
  out.schedule = synth_trajectory(out.trajectory, omega_max, env);
  return out;
}

std::pair<double, double> bloch_coordinates(const Vec2& state) {
  const double n0 = std::abs(state(0)), n1 = std::abs(state(1));
  if (n0 == 0.0 && n1 == 0.0) throw std::domain_error("bloch_coordinates: zero vector");
  const double chi = 2.0 * std::atan2(n1, n0);
  if (n0 < 1e-14 || n1 < 1e-14) return {chi, 0.0};  // pole convention
  const double xi = wrap_angle(std::arg(state(1)) - std::arg(state(0)));
  return {chi, xi};
}

Vec2 evolution_state(const GateParams& p) {
  Vec2 v;
  v(0) = std::cos(0.5 * p.chi0);
  v(1) = std::sin(0.5 * p.chi0) * std::exp(Complex(0.0, p.xi0));
  return v;
}

double dynamical_phase_check(const PulseSchedule& s, const GateParams& p, int base_steps) {
  Vec2 psi = evolution_state(p);
  double gamma_d = 0.0;
  auto steps = integration_steps(s, base_steps);
  for (auto& n : steps) n *= 2;  // the phase quadrature wants extra margin
  double t0 = 0.0;
  for (size_t i = 0; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    if (seg.degenerate()) continue;
    const double dt = seg.duration / steps[i];
    for (int k = 0; k < steps[i]; ++k) {
      const Mat2 h = sample_hamiltonian(s, t0 + (k + 0.5) * dt);
      const Mat2 u = exp_minus_i_h2(h, dt);
      const Mat2 half = exp_minus_i_h2(h, 0.5 * dt);
      const Vec2 mid = half * psi;
      gamma_d -= (mid.adjoint() * h * mid)(0).real() * dt;
      psi = u * psi;
    }
    t0 += seg.duration;
  }
  return gamma_d;
}

double overall_phase(const PulseSchedule& s, const GateParams& p, int base_steps) {
  const Mat2 u = propagate_schedule(s, {}, base_steps);
  const Vec2 psi0 = evolution_state(p);
  return std::arg((psi0.adjoint() * u * psi0)(0));
}

std::vector<std::pair<double, double>> boundary_coordinates(const PulseSchedule& s,
                                                            const GateParams& p,
                                                            int base_steps) {
  std::vector<std::pair<double, double>> out;
  Vec2 psi = evolution_state(p);
  out.push_back(bloch_coordinates(psi));
  const auto steps = integration_steps(s, base_steps);
  double t0 = 0.0;
  for (size_t i = 0; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    if (!seg.degenerate()) {
      const double dt = seg.duration / steps[i];
      for (int k = 0; k < steps[i]; ++k) {
        psi = exp_minus_i_h2(sample_hamiltonian(s, t0 + (k + 0.5) * dt), dt) * psi;
      }
      t0 += seg.duration;
    }
    out.push_back(bloch_coordinates(psi));
  }
  return out;
}

std::string trajectory_to_csv(const TrajectorySpec& traj) {
  std::string out = "segment,kind,chi,xi_start,xi_end,area,detune_factor\n";
  char line[200];
  const auto plans = plan_trajectory(traj);
  for (size_t i = 0; i < plans.size(); ++i) {
    const auto& sp = plans[i];
    const double chi =
        sp.kind == SegmentKind::Longitude ? traj.waypoints[i].chi : sp.chi;
    std::snprintf(line, sizeof line, "%zu,%s,%.12g,%.12g,%.12g,%.12g,%.12g\n", i,
                  sp.kind == SegmentKind::Longitude ? "longitude" : "latitude", chi,
                  sp.xi_start, sp.xi_end, sp.area, sp.detune);
    out += line;
  }
  return out;
}

}  // namespace geotraj
