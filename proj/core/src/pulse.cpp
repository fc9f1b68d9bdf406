#include "geotraj/pulse.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace geotraj {

double segment_duration(double area, Envelope env, double omega_max) {
  if (area == 0.0) return 0.0;
  switch (env) {
    case Envelope::Sine:
      return 0.5 * kPi * area / omega_max;  // area = 2 Omega_max d / pi
    case Envelope::Square:
      return area / omega_max;
  }
  return 0.0;
}

PulseSegment make_segment(double area, Envelope env, double omega_max,
                          double phi_base, double slope_factor, double detune_factor) {
  if (area < 0.0) throw std::invalid_argument("segment area must be >= 0");
  PulseSegment seg;
  seg.area = area;
  seg.envelope = env;
  seg.duration = segment_duration(area, env, omega_max);
  seg.phi_base = phi_base;
  seg.slope_factor = slope_factor;
  seg.detune_factor = detune_factor;
  return seg;
}

double PulseSchedule::total_time() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

double PulseSchedule::total_area() const {
  double a = 0.0;
  for (const auto& s : segments) a += s.area;
  return a;
}

std::vector<double> PulseSchedule::boundaries() const {
  std::vector<double> b{0.0};
  double t = 0.0;
  for (const auto& s : segments) {
    t += s.duration;
    b.push_back(t);
  }
  return b;
}

namespace {

struct Located {
  const PulseSegment* seg;
  double local;  // t - segment start
};

Located locate(const PulseSchedule& s, double t) {
  const double tau = s.total_time();
  if (t < -1e-12 || t > tau + 1e-12)
    throw std::domain_error("sample: t outside [0, tau]");
  double t0 = 0.0;
  for (const auto& seg : s.segments) {
    if (seg.duration == 0.0) continue;
    if (t <= t0 + seg.duration || &seg == &s.segments.back()) {
      return {&seg, std::min(std::max(t - t0, 0.0), seg.duration)};
    }
    t0 += seg.duration;
  }
  // Only degenerate segments (or empty schedule): identity drive.
  static const PulseSegment kZero{};
  return {&kZero, 0.0};
}

}  // namespace

PulseSample PulseSchedule::sample(double t, const ErrorModel& err) const {
  auto [seg, s] = locate(*this, t);
  double omega = 0.0, domega = 0.0, accum = 0.0;
  if (!seg->degenerate()) {
    const double d = seg->duration;
    switch (seg->envelope) {
      case Envelope::Sine: {
        const double x = kPi * s / d;
        omega = omega_max * std::sin(x);
        domega = omega_max * (kPi / d) * std::cos(x);
        accum = 0.5 * seg->area * (1.0 - std::cos(x));
        break;
      }
      case Envelope::Square:
        omega = omega_max;
        domega = 0.0;
        accum = omega_max * s;
        break;
    }
  }
  PulseSample out;
  const double scale = 1.0 + err.epsilon;
  out.omega = scale * omega;
  out.domega_dt = scale * domega;
  // The phase program is precomputed hardware output; it tracks the nominal
  // accumulated area, not the error-scaled one.
  out.phi = seg->phi_base + seg->slope_factor * accum;
  out.dphi_dt = seg->slope_factor * omega;
  out.delta = seg->detune_factor * out.omega + err.delta * omega_max + err.zeta;
  return out;
}

DragTerms drag_terms(const PulseSchedule& s, const PulseSample& p) {
  DragTerms d;
  if (s.drag_alpha <= 0.0) return d;
  const double gap = s.drag_alpha - p.delta - p.dphi_dt;
  d.quad = -(s.drag_quad * p.domega_dt) / gap;
  d.delta_shift = s.drag_stark * p.omega * p.omega / (2.0 * gap);
  return d;
}

Mat2 sample_hamiltonian(const PulseSchedule& s, double t, const ErrorModel& err) {
  const PulseSample p = s.sample(t, err);
  const DragTerms d = drag_terms(s, p);
  const Complex amp = Complex(p.omega, d.quad) * std::exp(Complex(0.0, -p.phi));
  const double delta = p.delta + d.delta_shift;
  Mat2 h;
  h(0, 0) = -0.5 * delta;
  h(1, 1) = 0.5 * delta;
  h(0, 1) = 0.5 * amp;
  h(1, 0) = 0.5 * std::conj(amp);
  return h;
}

HamiltonianSampler hamiltonian_sampler(const PulseSchedule& s, const ErrorModel& err) {
  return [s, err](double t) -> Mat { return sample_hamiltonian(s, t, err); };
}

std::vector<int> integration_steps(const PulseSchedule& s, int base_steps) {
  std::vector<int> steps;
  steps.reserve(s.segments.size());
  for (const auto& seg : s.segments) {
    if (seg.degenerate()) {
      steps.push_back(0);
      continue;
    }
    // Total rotation + phase-winding angle of the segment sets how many
    // midpoint steps keep the local error below ~1e-8.
    const double angle = seg.area * std::sqrt(1.0 + seg.detune_factor * seg.detune_factor) +
                         std::abs(seg.slope_factor) * seg.area;
    const int n = std::max(base_steps, static_cast<int>(std::ceil(450.0 * angle)));
    steps.push_back(n);
  }
  return steps;
}

Mat2 propagate_schedule(const PulseSchedule& s, const ErrorModel& err, int base_steps) {
  Mat2 u = Mat2::Identity();
  const auto steps = integration_steps(s, base_steps);
  double t0 = 0.0;
  for (size_t i = 0; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    if (seg.degenerate()) continue;
    const double dt = seg.duration / steps[i];
    for (int k = 0; k < steps[i]; ++k) {
      const double tm = t0 + (k + 0.5) * dt;
      u = exp_minus_i_h2(sample_hamiltonian(s, tm, err), dt) * u;
    }
    t0 += seg.duration;
  }
  return u;
}

Mat2 conventional_unitary(const ConventionalGateSpec& spec) {
  const double c = std::cos(0.5 * spec.theta_c);
  const double sn = std::sin(0.5 * spec.theta_c);
  Mat2 u;
  u(0, 0) = c;
  u(1, 1) = c;
  u(0, 1) = -kI * sn * std::exp(Complex(0.0, -spec.phi_c));
  u(1, 0) = -kI * sn * std::exp(Complex(0.0, spec.phi_c));
  return u;
}

PulseSchedule synth_conventional(const ConventionalGateSpec& spec, double omega_max,
                                 Envelope env) {
  if (spec.theta_c < 0.0) throw std::invalid_argument("theta_c must be >= 0");
  PulseSchedule s;
  s.omega_max = omega_max;
  if (spec.theta_c == 0.0) return s;  // identity
  s.segments.push_back(make_segment(spec.theta_c, env, omega_max, spec.phi_c, 0.0, 0.0));
  return s;
}

GateName gate_name_from_string(const std::string& name) {
  if (name == "I") return GateName::I;
  if (name == "H") return GateName::H;
  if (name == "Xpi") return GateName::Xpi;
  if (name == "Ypi") return GateName::Ypi;
  if (name == "Xpi2") return GateName::Xpi2;
  if (name == "Ypi2") return GateName::Ypi2;
  if (name == "mXpi2") return GateName::mXpi2;
  if (name == "mYpi2") return GateName::mYpi2;
  throw std::invalid_argument("unknown gate name: " + name);
}

std::string to_string(GateName g) {
  switch (g) {
    case GateName::I: return "I";
    case GateName::H: return "H";
    case GateName::Xpi: return "Xpi";
    case GateName::Ypi: return "Ypi";
    case GateName::Xpi2: return "Xpi2";
    case GateName::Ypi2: return "Ypi2";
    case GateName::mXpi2: return "mXpi2";
    case GateName::mYpi2: return "mYpi2";
  }
  return "?";
}

std::vector<ConventionalGateSpec> conventional_composite(GateName name) {
  switch (name) {
    case GateName::I: return {{2.0 * kPi, 0.0}};
    case GateName::H: return {{kPi, 0.0}, {0.5 * kPi, -0.5 * kPi}};  // X_pi then Y_{-pi/2}
    case GateName::Xpi: return {{kPi, 0.0}};
    case GateName::Ypi: return {{kPi, 0.5 * kPi}};
    case GateName::Xpi2: return {{0.5 * kPi, 0.0}};
    case GateName::Ypi2: return {{0.5 * kPi, 0.5 * kPi}};
    case GateName::mXpi2: return {{0.5 * kPi, kPi}};
    case GateName::mYpi2: return {{0.5 * kPi, -0.5 * kPi}};
  }
  throw std::invalid_argument("unknown gate");
}

PulseSchedule synth_conventional_composite(GateName name, double omega_max, Envelope env) {
  PulseSchedule out;
  out.omega_max = omega_max;
  for (const auto& spec : conventional_composite(name)) {
    out = concat(out, synth_conventional(spec, omega_max, env));
  }
  return out;
}

PulseSchedule concat(const PulseSchedule& a, const PulseSchedule& b) {
  if (!a.segments.empty() && !b.segments.empty() && a.omega_max != b.omega_max)
    throw std::invalid_argument("concat: omega_max mismatch");
  PulseSchedule out = a.segments.empty() ? b : a;
  if (!a.segments.empty() && !b.segments.empty()) {
    out = a;
    out.segments.insert(out.segments.end(), b.segments.begin(), b.segments.end());
  }
  return out;
}

// --- serialization -----------------------------------------------------------

using nlohmann::json;

std::string schedule_to_json(const PulseSchedule& s) {
  json j;
  j["omega_max"] = s.omega_max;
  j["drag_alpha"] = s.drag_alpha;
  j["drag_quad"] = s.drag_quad;
  j["drag_stark"] = s.drag_stark;
  j["segments"] = json::array();
  for (const auto& seg : s.segments) {
    j["segments"].push_back({
        {"area", seg.area},
        {"envelope", seg.envelope == Envelope::Sine ? "sine" : "square"},
        {"phi_base", seg.phi_base},
        {"slope_factor", seg.slope_factor},
        {"detune_factor", seg.detune_factor},
    });
  }
  return j.dump(2);
}

PulseSchedule schedule_from_json(const std::string& text) {
  const json j = json::parse(text);
  PulseSchedule s;
  s.omega_max = j.at("omega_max").get<double>();
  s.drag_alpha = j.at("drag_alpha").get<double>();
  s.drag_quad = j.at("drag_quad").get<double>();
  s.drag_stark = j.at("drag_stark").get<double>();
  for (const auto& js : j.at("segments")) {
    const std::string env = js.at("envelope").get<std::string>();
    s.segments.push_back(make_segment(
        js.at("area").get<double>(),
        env == "sine" ? Envelope::Sine : Envelope::Square, s.omega_max,
        js.at("phi_base").get<double>(), js.at("slope_factor").get<double>(),
        js.at("detune_factor").get<double>()));
  }
  return s;
}

std::string schedule_to_csv(const PulseSchedule& s, int base_steps) {
  std::string out = "t,omega,phi,delta\n";
  char line[160];
  const auto steps = integration_steps(s, base_steps);
  double t0 = 0.0;
  for (size_t i = 0; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    if (seg.degenerate()) continue;
    const double dt = seg.duration / steps[i];
    for (int k = 0; k <= steps[i]; ++k) {
      const double t = t0 + k * dt;
      const PulseSample p = s.sample(std::min(t, s.total_time()));
      std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g\n", t, p.omega, p.phi, p.delta);
      out += line;
    }
    t0 += seg.duration;
  }
  return out;
}

}  // namespace geotraj
