#include "geotraj/twoqubit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "geotraj/threads.hpp"

namespace geotraj {

namespace {
constexpr double kBesselPeak = 1.8411837813406593;  // argmax of J1
constexpr int kDim = 6;  // {|00>,|01>,|10>,|02>,|11>,|20>}
constexpr int kComp6[4] = {0, 1, 2, 4};
constexpr double kSqrt2 = 1.4142135623730951;
}  // namespace

void TwoQubitParams::validate() const {
  if (g <= 0.0) throw ParameterError("coupling g must be positive");
  if (m_cutoff < 3 || m_cutoff > 20)
    throw ParameterError("m_cutoff must lie in [3, 20]");
}

void ModulationParams::validate() const {
  if (nu <= 0.0) throw ParameterError("modulation frequency nu must be positive");
  if (beta < 0.0) throw ParameterError("beta must be >= 0");
}

TwoQubitGate two_qubit_gate_from_string(const std::string& name) {
  if (name == "iSWAP") return TwoQubitGate::iSWAP;
  if (name == "CZ") return TwoQubitGate::CZ;
  throw ParameterError("unknown two-qubit gate name: " + name);
}

std::string to_string(TwoQubitGate g) {
  return g == TwoQubitGate::iSWAP ? "iSWAP" : "CZ";
}

double SubspaceSelect::resonant_nu(const TwoQubitParams& p) const {
  const double base =
      kind == SubspaceKind::SingleExcitation ? p.delta1 : p.delta1 - p.alpha2;
  return base + delta_s;
}

double SubspaceSelect::coupling_factor() const {
  return kind == SubspaceKind::SingleExcitation ? 2.0 : 2.0 * kSqrt2;
}

void SubspaceSelect::validate(const TwoQubitParams& p) const {
  const double nu = resonant_nu(p);
  if (nu <= 0.0) throw ParameterError("subspace resonance frequency must be positive");
  if (std::abs(delta_s) >= nu / 10.0)
    throw ParameterError("|delta_s| must stay below nu / 10");
}

double effective_coupling(const TwoQubitParams& p, const SubspaceSelect& sub, double beta) {
  if (beta < 0.0) throw ParameterError("beta must be >= 0");
  return sub.coupling_factor() * p.g * bessel_j(1, beta);
}

double beta_for_coupling(const TwoQubitParams& p, const SubspaceSelect& sub,
                         double g_prime) {
  if (g_prime <= 0.0) throw ParameterError("g' must be positive");
  const double g_max = effective_coupling(p, sub, kBesselPeak);
  if (g_prime > g_max * (1.0 + 1e-12))
    throw ParameterError("g' exceeds the coupling at the first Bessel maximum");
  double lo = 0.0, hi = kBesselPeak;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (effective_coupling(p, sub, mid) < g_prime)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// i^|m| J_|m|(beta); by J_{-m} = (-1)^m J_m the signed-m coefficient
// i^m J_m(beta) has the same value for +m and -m.
Complex sideband_coeff(int m, double beta) {
  const int a = std::abs(m);
  const double j = bessel_j(a, beta);
  switch (a % 4) {
    case 0: return Complex(j, 0.0);
    case 1: return Complex(0.0, j);
    case 2: return Complex(-j, 0.0);
    default: return Complex(0.0, -j);
  }
}

struct Family {
  int a, b;      // H(a, b) = pref * C(t) * e^{i omega t}
  double pref;
  double omega;
};

std::vector<Family> coupling_families(const TwoQubitParams& p, bool five_state) {
  // five_state: basis {|01>,|10>,|02>,|11>,|20>}; otherwise the 6-dim basis
  // with |00> prepended.
  const int off = five_state ? 0 : 1;
  return {{0 + off, 1 + off, p.g, p.delta1},
          {2 + off, 3 + off, kSqrt2 * p.g, p.delta1 - p.alpha2},
          {3 + off, 4 + off, kSqrt2 * p.g, p.delta1 + p.alpha1}};
}

}  // namespace

Mat build_interaction_hamiltonian(const TwoQubitParams& p, const ModulationParams& m,
                                  double t) {
  p.validate();
  m.validate();
  if (t < 0.0) throw ParameterError("t must be >= 0");
  const double theta = m.nu * t + m.phi;
  Complex c = sideband_coeff(0, m.beta);
  for (int k = 1; k <= p.m_cutoff; ++k)
    c += 2.0 * sideband_coeff(k, m.beta) * std::cos(k * theta);
  Mat h = Mat::Zero(5, 5);
  for (const auto& f : coupling_families(p, true)) {
    const Complex e = f.pref * c * std::exp(kI * f.omega * t);
    h(f.a, f.b) = e;
    h(f.b, f.a) = std::conj(e);
  }
  return h;
}

// --- modulation programs -----------------------------------------------------

double ModulationProgram::total_time() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

double ModulationProgram::phi(double t) const {
  double t0 = 0.0;
  for (size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (t <= t0 + s.duration + 1e-12 || i + 1 == segments.size())
      return s.phi0 + s.phi_slope * std::min(std::max(t - t0, 0.0), s.duration);
    t0 += s.duration;
  }
  throw ParameterError("empty modulation program");
}

double ModulationProgram::beta(double t) const {
  double t0 = 0.0;
  for (size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (t <= t0 + s.duration + 1e-12 || i + 1 == segments.size()) return s.beta;
    t0 += s.duration;
  }
  throw ParameterError("empty modulation program");
}

ModulationProgram effective_two_level(const TwoQubitParams& p, const SubspaceSelect& sub,
                                      const PulseSchedule& schedule) {
  p.validate();
  sub.validate(p);
  const double g_prime = schedule.omega_max;
  const double beta = beta_for_coupling(p, sub, g_prime);
  ModulationProgram out;
  out.nu = sub.resonant_nu(p);
  out.subspace = sub.kind;
  double t0 = 0.0, theta = 0.0;  // theta = int Delta' dt so far
  for (const auto& seg : schedule.segments) {
    if (seg.degenerate()) continue;
    if (seg.envelope != Envelope::Square)
      throw ParameterError("effective_two_level: segments must use square envelopes");
    ModulationSegment m;
    m.duration = seg.duration;
    m.beta = beta;
    // phi' = Delta_s t - Theta(t) + phi(t) - pi/2 must track the schedule's
    // phase law phi_base + slope * g' * (t - t0).
    m.phi_slope = (seg.slope_factor + seg.detune_factor) * g_prime - sub.delta_s;
    m.phi0 = seg.phi_base + theta - sub.delta_s * t0 + 0.5 * kPi;
    out.segments.push_back(m);
    theta += seg.detune_factor * seg.area;
    t0 += seg.duration;
  }
  if (out.segments.empty())
    throw ParameterError("effective_two_level: schedule has no active segments");
  return out;
}

// --- gate synthesis ----------------------------------------------------------

Mat embed_computational(SubspaceKind kind, const Mat2& u_sub) {
  Mat e = Mat::Identity(4, 4);
  if (kind == SubspaceKind::SingleExcitation) {
    e(1, 1) = u_sub(0, 0);
    e(1, 2) = u_sub(0, 1);
    e(2, 1) = u_sub(1, 0);
    e(2, 2) = u_sub(1, 1);
  } else {
    e(3, 3) = u_sub(1, 1);  // |11> is the lower subspace state; |02> leaks out
  }
  return e;
}

namespace {

GateParams two_qubit_gate_params(TwoQubitGate gate) {
  if (gate == TwoQubitGate::iSWAP) return {0.5 * kPi, 0.0, 0.5 * kPi};
  return {0.0, 0.0, kPi};  // CZ: -1 on both poles of {|02>,|11>}
}

SubspaceKind gate_subspace(TwoQubitGate gate) {
  return gate == TwoQubitGate::iSWAP ? SubspaceKind::SingleExcitation
                                     : SubspaceKind::TwoExcitation;
}

double embedded_infidelity(const PulseSchedule& sched, SubspaceKind kind,
                           const Mat& target4, double dp, int base_steps) {
  ErrorModel err;
  err.delta = dp;  // Omega_m = g', so delta * Omega_m = delta' g'
  err.delta_p = dp;
  const Mat2 u = propagate_schedule(sched, err, base_steps);
  return 1.0 - gate_fidelity(target4, embed_computational(kind, u));
}

struct ExactVariant {
  FiveSegmentResult synth;
  GateParams params;  // as synthesized (possibly the pi-shifted pair)
  BranchChoice branch;
  double metric = std::numeric_limits<double>::quiet_NaN();
};

// Best implementation among the variants that reproduce the target subspace
// unitary exactly: the (gamma_g + pi, xi0 + pi) pair when it leaves
// gate_unitary unchanged, and the 2*pi-shifted latitude span.
ExactVariant robust_exact_variant(const GateParams& gp, SubspaceKind kind, double chi1,
                                  double chi3, double omega_max, Envelope env,
                                  ScanMetric metric, double dp, int base_steps) {
  const Mat2 t2 = gate_unitary(gp);
  const Mat t4 = embed_computational(kind, t2);
  ExactVariant best;
  std::string last_error = "no feasible implementation";
  for (bool plus_pi : {false, true}) {
    GateParams q = gp;
    if (plus_pi) {
      q.gamma_g += kPi;
      q.xi0 += kPi;
      if ((gate_unitary(q) - t2).norm() > 1e-9) continue;  // phase is physical here
    }
    for (bool alt : {false, true}) {
      try {
        auto r = synth_five_segment(q, chi1, chi3, omega_max, env, alt);
        if (std::abs(r.trajectory.waypoints[2].xi - r.trajectory.waypoints[1].xi) < 1e-9)
          continue;  // zero latitude span: not a loop
        double m = embedded_infidelity(r.schedule, kind, t4, dp, base_steps);
        if (metric == ScanMetric::MeanAbs)
          m = 0.5 * (m + embedded_infidelity(r.schedule, kind, t4, -dp, base_steps));
        else if (metric == ScanMetric::SymmetricMax)
          m = std::max(m, embedded_infidelity(r.schedule, kind, t4, -dp, base_steps));
        if (!std::isfinite(best.metric) || m < best.metric) {
          best.synth = std::move(r);
          best.params = q;
          best.branch = {plus_pi, alt};
          best.metric = m;
        }
      } catch (const DegenerateLoopError& e) {
        last_error = e.what();
      } catch (const SingularDriftError& e) {
        last_error = e.what();
      } catch (const ParameterError& e) {
        last_error = e.what();
      }
    }
  }
  if (!std::isfinite(best.metric))
    throw DegenerateLoopError("two-qubit synthesis: " + last_error);
  return best;
}

}  // namespace

TwoQubitSynthesis synth_two_qubit_geo(TwoQubitGate gate, double chi1, double chi3,
                                      const TwoQubitParams& p, double beta) {
  p.validate();
  const GateParams gp = two_qubit_gate_params(gate);
  if (gate == TwoQubitGate::CZ) chi1 = 0.0;  // chi0 = 0 pins the first waypoint
  SubspaceSelect sub{gate_subspace(gate), 0.0};
  const double g_prime = effective_coupling(p, sub, beta);
  if (g_prime <= 0.0) throw ParameterError("beta gives a vanishing effective coupling");
  auto v = robust_exact_variant(gp, sub.kind, chi1, chi3, g_prime, Envelope::Square,
                                ScanMetric::SymmetricMax, 0.1, 2000);
  TwoQubitSynthesis out;
  out.effective = std::move(v.synth.schedule);
  out.trajectory = std::move(v.synth.trajectory);
  out.gate = v.params;
  out.branch = v.branch;
  out.subspace = sub.kind;
  out.program = effective_two_level(p, sub, out.effective);
  out.target_sub = gate_unitary(gp);
  out.target = embed_computational(sub.kind, out.target_sub);
  return out;
}

TwoQubitSynthesis synth_two_qubit_conventional(TwoQubitGate gate, const TwoQubitParams& p,
                                               double beta) {
  p.validate();
  SubspaceSelect sub{gate_subspace(gate), 0.0};
  const double g_prime = effective_coupling(p, sub, beta);
  const ConventionalGateSpec spec =
      gate == TwoQubitGate::iSWAP ? ConventionalGateSpec{kPi, kPi}
                                  : ConventionalGateSpec{2.0 * kPi, 0.0};
  TwoQubitSynthesis out;
  out.effective = synth_conventional(spec, g_prime, Envelope::Square);
  out.subspace = sub.kind;
  out.program = effective_two_level(p, sub, out.effective);
  out.target_sub = conventional_unitary(spec);
  out.target = embed_computational(sub.kind, out.target_sub);
  return out;
}

// --- sensitivity (effective model) -------------------------------------------

namespace {

SensitivityCurve embedded_curve(const PulseSchedule& sched, SubspaceKind kind,
                                const Mat& target4, const std::vector<double>& grid,
                                const std::string& name, int base_steps) {
  SensitivityCurve c;
  c.gate_name = name;
  c.delta_grid = grid;
  for (double dp : grid)
    c.infidelity.push_back(embedded_infidelity(sched, kind, target4, dp, base_steps));
  return c;
}

}  // namespace

SensitivityCurve sensitivity_two_qubit(TwoQubitGate gate, double chi1, double chi3,
                                       const std::vector<double>& grid, int base_steps) {
  const GateParams gp = two_qubit_gate_params(gate);
  if (gate == TwoQubitGate::CZ) chi1 = 0.0;
  const SubspaceKind kind = gate_subspace(gate);
  const auto v = robust_exact_variant(gp, kind, chi1, chi3, 1.0, Envelope::Sine,
                                      ScanMetric::SymmetricMax, 0.1, base_steps);
  const Mat t4 = embed_computational(kind, gate_unitary(gp));
  return embedded_curve(v.synth.schedule, kind, t4, grid, to_string(gate) + "g",
                        base_steps);
}

SensitivityCurve sensitivity_two_qubit_conventional(TwoQubitGate gate,
                                                    const std::vector<double>& grid,
                                                    int base_steps) {
  const SubspaceKind kind = gate_subspace(gate);
  const ConventionalGateSpec spec =
      gate == TwoQubitGate::iSWAP ? ConventionalGateSpec{kPi, kPi}
                                  : ConventionalGateSpec{2.0 * kPi, 0.0};
  const PulseSchedule sched = synth_conventional(spec, 1.0, Envelope::Sine);
  const Mat t4 = embed_computational(kind, conventional_unitary(spec));
  return embedded_curve(sched, kind, t4, grid, to_string(gate) + "c", base_steps);
}

Landscape scan_two_qubit_landscape(TwoQubitGate gate, const ScanSettings& s) {
  const GateParams gp = two_qubit_gate_params(gate);
  const SubspaceKind kind = gate_subspace(gate);
  Landscape l;
  l.gate = gp;
  l.delta_probe = s.delta_probe;
  l.chi1_grid = scan_grid(0.0, gp.chi0, s.resolution);
  l.chi3_grid = scan_grid(gp.chi0, kPi, s.resolution);
  const size_t n1 = l.chi1_grid.size(), n3 = l.chi3_grid.size();
  l.metric.setConstant(n1, n3, std::numeric_limits<double>::quiet_NaN());
  l.area.setConstant(n1, n3, std::numeric_limits<double>::quiet_NaN());

  parallel_for(n1 * n3, s.threads, [&](size_t idx) {
    const size_t i = idx / n3, j = idx % n3;
    try {
      const auto v =
          robust_exact_variant(gp, kind, l.chi1_grid[i], l.chi3_grid[j], s.omega_max,
                               s.envelope, s.metric, s.delta_probe, s.base_steps);
      l.metric(i, j) = v.metric;
      l.area(i, j) = v.synth.schedule.total_area();
    } catch (const std::invalid_argument&) {
      // infeasible cell stays NaN
    }
  });

  bool any = false;
  for (size_t i = 0; i < n1 && !any; ++i)
    for (size_t j = 0; j < n3 && !any; ++j)
      if (std::isfinite(l.metric(i, j))) any = true;
  if (!any) throw ParameterError("scan_two_qubit_landscape: empty feasible set");
  return l;
}

// --- full model --------------------------------------------------------------

namespace {

struct SparseSuper {
  struct Entry {
    int row, col;
    double val;
  };
  std::vector<Entry> entries;

  void apply(Mat& rho, Complex* scratch) const {
    const Complex* v = rho.data();
    for (int i = 0; i < kDim * kDim; ++i) scratch[i] = Complex(0.0, 0.0);
    for (const auto& e : entries) scratch[e.row] += e.val * v[e.col];
    std::copy(scratch, scratch + kDim * kDim, rho.data());
  }
};

// exp(A) for a small real matrix by scaling-and-squaring with Taylor terms.
Eigen::MatrixXd expm_real(Eigen::MatrixXd a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    a /= std::pow(2.0, squarings);
  }
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 18; ++k) {
    term = (term * a) / k;
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

int vec_index(int r, int c) { return r + kDim * c; }  // column-major vec(rho)

// Dissipator superoperator for both transmons: lowering with sqrt(n) weights
// at rate 1/T1 and number-operator dephasing at rate 2/Tphi, acting on the
// 6-dim two-qubit basis.
Eigen::MatrixXd build_dissipator(double t1, double tphi) {
  std::vector<Eigen::MatrixXd> ls;
  if (std::isfinite(t1)) {
    Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(kDim, kDim);
    a1(0, 2) = 1.0;            // |10> -> |00>
    a1(1, 4) = 1.0;            // |11> -> |01>
    a1(2, 5) = kSqrt2;         // |20> -> |10>
    Eigen::MatrixXd a2 = Eigen::MatrixXd::Zero(kDim, kDim);
    a2(0, 1) = 1.0;            // |01> -> |00>
    a2(2, 4) = 1.0;            // |11> -> |10>
    a2(1, 3) = kSqrt2;         // |02> -> |01>
    ls.push_back(a1 / std::sqrt(t1));
    ls.push_back(a2 / std::sqrt(t1));
  }
  if (std::isfinite(tphi)) {
    Eigen::VectorXd n1(kDim), n2(kDim);
    n1 << 0, 0, 1, 0, 1, 2;
    n2 << 0, 1, 0, 2, 1, 0;
    ls.push_back(std::sqrt(2.0 / tphi) * Eigen::MatrixXd(n1.asDiagonal()));
    ls.push_back(std::sqrt(2.0 / tphi) * Eigen::MatrixXd(n2.asDiagonal()));
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(kDim * kDim, kDim * kDim);
  for (const auto& l : ls) {
    const Eigen::MatrixXd m = l.transpose() * l;  // L^T L = L^dag L (L real)
    for (int r = 0; r < kDim; ++r)
      for (int c = 0; c < kDim; ++c)
        for (int rp = 0; rp < kDim; ++rp)
          for (int cp = 0; cp < kDim; ++cp) {
            const double v = l(r, rp) * l(c, cp);  // L rho L^dag term
            if (v != 0.0) d(vec_index(r, c), vec_index(rp, cp)) += v;
          }
    for (int r = 0; r < kDim; ++r)
      for (int c = 0; c < kDim; ++c) {
        for (int k = 0; k < kDim; ++k) {
          if (m(r, k) != 0.0) d(vec_index(r, c), vec_index(k, c)) -= 0.5 * m(r, k);
          if (m(k, c) != 0.0) d(vec_index(r, c), vec_index(r, k)) -= 0.5 * m(k, c);
        }
      }
  }
  return d;
}

SparseSuper sparsify(const Eigen::MatrixXd& e) {
  SparseSuper s;
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j)
      if (std::abs(e(i, j)) > 1e-15) s.entries.push_back({i, j, e(i, j)});
  return s;
}

// Mean of e^{i omega t} over [t1, t2].
Complex phase_average(double omega, double t1, double t2) {
  const double x = omega * (t2 - t1);
  if (std::abs(x) < 1e-8)
    return std::exp(kI * (0.5 * omega * (t1 + t2))) * (1.0 - x * x / 24.0);
  return (std::exp(kI * omega * t2) - std::exp(kI * omega * t1)) /
         (kI * omega * (t2 - t1));
}

}  // namespace

std::vector<Mat> evolve_full(const TwoQubitSynthesis& syn, const TwoQubitParams& p,
                             double nu, const std::vector<Mat>& rho0s,
                             const FullSimSettings& s) {
  p.validate();
  if (nu <= 0.0) throw ParameterError("nu must be positive");
  for (const auto& r : rho0s)
    if (r.rows() != kDim || r.cols() != kDim)
      throw DimensionError("evolve_full: operators must be 6x6");

  const bool open = std::isfinite(s.t1) || std::isfinite(s.tphi);
  Eigen::MatrixXd dissipator;
  if (open) dissipator = build_dissipator(s.t1, s.tphi);

  const auto fams = coupling_families(p, false);
  const int resonant_family = syn.subspace == SubspaceKind::SingleExcitation ? 0 : 1;

  std::vector<Mat> rhos = rho0s;
  std::vector<Complex> scratch(kDim * kDim);
  const double dt_target = s.dt_factor / nu;

  long total_steps = 0;
  double seg_start = 0.0;
  for (const auto& seg : syn.program.segments) {
    if (seg.duration <= 0.0) continue;
    const int steps = std::max(1, static_cast<int>(std::ceil(seg.duration / dt_target)));
    total_steps += steps;
    if (total_steps > s.max_steps)
      throw ConvergenceError("evolve_full: step cap exceeded");
    const double dt = seg.duration / steps;

    // phi(t) = alpha + slope * t within the segment (global time).
    const double slope = seg.phi_slope;
    const double alpha = seg.phi0 - slope * seg_start;

    struct Term {
      int a, b;
      Complex coeff;
      double omega;
    };
    std::vector<Term> terms;
    for (size_t f = 0; f < fams.size(); ++f) {
      if (s.resonant_only && static_cast<int>(f) != resonant_family) continue;
      for (int m = -p.m_cutoff; m <= p.m_cutoff; ++m) {
        if (s.resonant_only && m != -1) continue;
        const Complex coeff = fams[f].pref * sideband_coeff(m, seg.beta) *
                              std::exp(kI * (m * alpha));
        if (std::abs(coeff) < 1e-16) continue;
        terms.push_back({fams[f].a, fams[f].b, coeff, fams[f].omega + m * (nu + slope)});
      }
    }

    SparseSuper e_half;
    if (open) e_half = sparsify(expm_real(dissipator * (0.5 * dt)));

    for (int k = 0; k < steps; ++k) {
      const double t1 = seg_start + k * dt;
      const double t2 = t1 + dt;
      Mat hbar = Mat::Zero(kDim, kDim);
      for (const auto& term : terms) {
        const Complex v = term.coeff * phase_average(term.omega, t1, t2);
        hbar(term.a, term.b) += v;
        hbar(term.b, term.a) += std::conj(v);
      }
      const Mat u = mat_exp(Mat(-kI * dt * hbar));
      for (auto& rho : rhos) {
        if (open) e_half.apply(rho, scratch.data());
        rho = u * rho * u.adjoint();
        if (open) e_half.apply(rho, scratch.data());
      }
    }
    seg_start += seg.duration;
  }
  return rhos;
}

namespace {

// Residual detuning-frame phase Theta(tau) = int Delta' dt of the schedule.
double frame_phase(const PulseSchedule& schedule) {
  double theta = 0.0;
  for (const auto& seg : schedule.segments) theta += seg.detune_factor * seg.area;
  return theta;
}

std::vector<Vec2> qubit_cardinals() {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Vec2> states(4);
  states[0] << 1, 0;
  states[1] << 0, 1;
  states[2] << r, r;
  states[3] << r, Complex(0, r);
  return states;
}

}  // namespace

double simulate_full(TwoQubitGate gate, double chi1, double chi3, const TwoQubitParams& p,
                     double nu, double beta, const FullSimSettings& s) {
  const auto syn = synth_two_qubit_geo(gate, chi1, chi3, p, beta);

  // Images of the computational operator basis |k><l| under the full map.
  std::vector<std::pair<int, int>> pairs;
  std::vector<Mat> ops;
  for (int k = 0; k < 4; ++k)
    for (int l = k; l < 4; ++l) {
      Mat e = Mat::Zero(kDim, kDim);
      e(kComp6[k], kComp6[l]) = 1.0;
      pairs.push_back({k, l});
      ops.push_back(std::move(e));
    }
  const auto evolved = evolve_full(syn, p, nu, ops, s);

  Mat sm[4][4];
  for (size_t i = 0; i < pairs.size(); ++i) {
    sm[pairs[i].first][pairs[i].second] = evolved[i];
    if (pairs[i].first != pairs[i].second)
      sm[pairs[i].second][pairs[i].first] = evolved[i].adjoint();
  }

  // Undo the known detuning frame at the final time: phases -/+ Theta/2 on
  // the upper/lower subspace states.
  const double theta = frame_phase(syn.effective);
  Eigen::Vector4cd frame = Eigen::Vector4cd::Ones();
  if (syn.subspace == SubspaceKind::SingleExcitation) {
    frame(1) = std::exp(Complex(0.0, -0.5 * theta));  // |01>
    frame(2) = std::exp(Complex(0.0, 0.5 * theta));   // |10>
  } else {
    frame(3) = std::exp(Complex(0.0, 0.5 * theta));   // |11>
  }

  // Average fidelity over the 16 cardinal product states, folded into one
  // 4x4 coefficient matrix for the residual-Z gauge search.
  const auto singles = qubit_cardinals();
  Eigen::Matrix4cd b = Eigen::Matrix4cd::Zero();
  for (const auto& s1 : singles) {
    for (const auto& s2 : singles) {
      Eigen::Vector4cd w;
      for (int a = 0; a < 2; ++a)
        for (int bq = 0; bq < 2; ++bq) w(2 * a + bq) = s1(a) * s2(bq);
      Eigen::Matrix4cd rho_c = Eigen::Matrix4cd::Zero();
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const Complex wkl = w(k) * std::conj(w(l));
          if (wkl == Complex(0.0, 0.0)) continue;
          for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
              rho_c(r, c) += wkl * sm[k][l](kComp6[r], kComp6[c]);
        }
      // rho in the corrected frame: V^dag rho V.
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          rho_c(r, c) *= std::conj(frame(r)) * frame(c);
      const Eigen::Vector4cd v = syn.target * w;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          b(r, c) += std::conj(v(r)) * rho_c(r, c) * v(c) / 16.0;
    }
  }

  // F(theta1, theta2) with phases (0, theta2, theta1, theta1 + theta2) on
  // (|00>,|01>,|10>,|11>): maximize over the two free Z angles.
  auto eval = [&b](double th1, double th2) {
    const Complex z1 = std::exp(Complex(0.0, th1));
    const Complex z2 = std::exp(Complex(0.0, th2));
    const Complex ph[4] = {Complex(1.0, 0.0), z2, z1, z1 * z2};
    Complex f = 0.0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) f += b(r, c) * ph[c] * std::conj(ph[r]);
    return f.real();
  };

  double best = -1.0, b1 = 0.0, b2 = 0.0;
  double range = 2.0 * kPi;
  const int n_coarse = 72;
  for (int i = 0; i < n_coarse; ++i)
    for (int j = 0; j < n_coarse; ++j) {
      const double f = eval(range * i / n_coarse, range * j / n_coarse);
      if (f > best) {
        best = f;
        b1 = range * i / n_coarse;
        b2 = range * j / n_coarse;
      }
    }
  double half = range / n_coarse;
  for (int level = 0; level < 4; ++level) {
    double nb1 = b1, nb2 = b2;
    for (int i = -8; i <= 8; ++i)
      for (int j = -8; j <= 8; ++j) {
        const double t1 = b1 + half * i / 8.0, t2 = b2 + half * j / 8.0;
        const double f = eval(t1, t2);
        if (f > best) {
          best = f;
          nb1 = t1;
          nb2 = t2;
        }
      }
    b1 = nb1;
    b2 = nb2;
    half /= 8.0;
  }
  return best;
}

NuBetaScan scan_nu_beta(TwoQubitGate gate, double chi1, double chi3,
                        const TwoQubitParams& p, const FullSimSettings& s, int nu_points,
                        int beta_points, double nu_halfwidth, double beta_lo,
                        double beta_hi, int threads) {
  p.validate();
  if (nu_points < 2 || beta_points < 2) throw ParameterError("scan grid needs >= 2 points");
  SubspaceSelect sub{gate_subspace(gate), 0.0};
  const double nu0 = sub.resonant_nu(p);
  NuBetaScan scan;
  for (int i = 0; i < nu_points; ++i)
    scan.nu_grid.push_back(nu0 - nu_halfwidth +
                           2.0 * nu_halfwidth * i / (nu_points - 1));
  for (int j = 0; j < beta_points; ++j)
    scan.beta_grid.push_back(beta_lo + (beta_hi - beta_lo) * j / (beta_points - 1));
  scan.fidelity.resize(nu_points, beta_points);

  parallel_for(static_cast<size_t>(nu_points) * beta_points, threads, [&](size_t idx) {
    const int i = static_cast<int>(idx) / beta_points;
    const int j = static_cast<int>(idx) % beta_points;
    scan.fidelity(i, j) =
        simulate_full(gate, chi1, chi3, p, scan.nu_grid[i], scan.beta_grid[j], s);
  });

  scan.best_fidelity = -1.0;
  for (int i = 0; i < nu_points; ++i)
    for (int j = 0; j < beta_points; ++j)
      if (scan.fidelity(i, j) > scan.best_fidelity) {
        scan.best_fidelity = scan.fidelity(i, j);
        scan.best_nu = scan.nu_grid[i];
        scan.best_beta = scan.beta_grid[j];
      }
  return scan;
}

std::string scan_to_csv(const NuBetaScan& scan) {
  std::string out = "nu,beta,fidelity\n";
  char line[100];
  for (size_t i = 0; i < scan.nu_grid.size(); ++i)
    for (size_t j = 0; j < scan.beta_grid.size(); ++j) {
      std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", scan.nu_grid[i],
                    scan.beta_grid[j], scan.fidelity(i, j));
      out += line;
    }
  return out;
}

}  // namespace geotraj
