#include "geotraj/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "geotraj/threads.hpp"

namespace geotraj {

std::vector<double> scan_grid(double lo, double hi, double res) {
  std::vector<double> g;
  if (hi - lo < 1e-12) {
    g.push_back(lo);
    return g;
  }
  const int n = static_cast<int>(std::round((hi - lo) / res));
  for (int i = 0; i <= n; ++i) {
    double v = lo + (hi - lo) * i / n;
    if (std::abs(v - 0.5 * kPi) < 0.25 * res) {
      v += 0.5 * res;
      if (v > hi) v -= res;  // keep inside the range
    }
    if (std::abs(v - 0.5 * kPi) < 1e-9) continue;
    g.push_back(v);
  }
  return g;
}

namespace {

ErrorModel probe_error(ErrorKind kind, double q) {
  ErrorModel err;
  switch (kind) {
    case ErrorKind::Detuning: err.delta = q; break;
    case ErrorKind::Amplitude: err.epsilon = q; break;
    case ErrorKind::ZZ: err.zeta = q; break;
  }
  return err;
}

double schedule_metric(const PulseSchedule& sched, const Mat2& target,
                       const ScanSettings& s) {
  auto infid = [&](double q) {
    return 1.0 - gate_fidelity(target,
                               propagate_schedule(sched, probe_error(s.error_kind, q),
                                                  s.base_steps));
  };
  switch (s.metric) {
    case ScanMetric::OneSided: return infid(s.delta_probe);
    case ScanMetric::MeanAbs:
      return 0.5 * (infid(s.delta_probe) + infid(-s.delta_probe));
    case ScanMetric::SymmetricMax: break;
  }
  return std::max(infid(s.delta_probe), infid(-s.delta_probe));
}

bool zero_latitude_span(const FiveSegmentResult& r) {
  return std::abs(r.trajectory.waypoints[2].xi - r.trajectory.waypoints[1].xi) < 1e-9;
}

}  // namespace

RobustSynthesis synth_five_segment_robust(const GateParams& p, double chi1, double chi3,
                                          const ScanSettings& s) {
  const Mat2 target = gate_unitary(p);
  RobustSynthesis best;
  std::string last_error = "no feasible implementation";
  for (bool plus_pi : {false, true}) {
    GateParams q = p;
    if (plus_pi) q.gamma_g += kPi;  // same gate up to global phase
    for (bool alt : {false, true}) {
      try {
        auto r = synth_five_segment(q, chi1, chi3, s.omega_max, s.envelope, alt);
        if (zero_latitude_span(r)) continue;  // not a loop, just the bare legs
        const double m = schedule_metric(r.schedule, target, s);
        if (!std::isfinite(best.metric) || m < best.metric) {
          best.synth = std::move(r);
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
    throw DegenerateLoopError("synth_five_segment_robust: " + last_error);
  return best;
}

Landscape scan_landscape(const GateParams& p, const ScanSettings& s) {
  p.validate();
  Landscape l;
  l.gate = p;
  l.delta_probe = s.delta_probe;
  l.chi1_grid = scan_grid(0.0, p.chi0, s.resolution);
  l.chi3_grid = scan_grid(p.chi0, kPi, s.resolution);
  const size_t n1 = l.chi1_grid.size(), n3 = l.chi3_grid.size();
  l.metric.setConstant(n1, n3, std::numeric_limits<double>::quiet_NaN());
  l.area.setConstant(n1, n3, std::numeric_limits<double>::quiet_NaN());

  parallel_for(n1 * n3, s.threads, [&](size_t idx) {
    const size_t i = idx / n3, j = idx % n3;
    try {
      const auto r = synth_five_segment_robust(p, l.chi1_grid[i], l.chi3_grid[j], s);
      l.metric(i, j) = r.metric;
      l.area(i, j) = r.synth.schedule.total_area();
    } catch (const std::invalid_argument&) {
      // infeasible cell stays NaN
    }
  });

  bool any = false;
  for (size_t i = 0; i < n1 && !any; ++i)
    for (size_t j = 0; j < n3 && !any; ++j)
      if (std::isfinite(l.metric(i, j))) any = true;
  if (!any) throw ParameterError("scan_landscape: empty feasible set");
  return l;
}

Optimum select_optimum(const Landscape& l, double region_band) {
  double min_metric = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < l.chi1_grid.size(); ++i)
    for (size_t j = 0; j < l.chi3_grid.size(); ++j)
      if (std::isfinite(l.metric(i, j))) min_metric = std::min(min_metric, l.metric(i, j));
  if (!std::isfinite(min_metric)) throw ParameterError("select_optimum: empty landscape");

  const double cutoff = min_metric * std::max(region_band, 1.0);
  Optimum best;
  for (size_t i = 0; i < l.chi1_grid.size(); ++i) {
    for (size_t j = 0; j < l.chi3_grid.size(); ++j) {
      const double m = l.metric(i, j);
      if (!std::isfinite(m) || m > cutoff) continue;
      const double a = l.area(i, j);
      if (!std::isfinite(best.metric) || a < best.area - 1e-12 ||
          (std::abs(a - best.area) <= 1e-12 && m < best.metric)) {
        best = {l.chi1_grid[i], l.chi3_grid[j], m, a};
      }
      // exact area+metric ties keep the first (lexicographic) cell
    }
  }
  return best;
}

OptimizeResult optimize_waypoints(const GateParams& p, const ScanSettings& s) {
  OptimizeResult out;
  out.coarse = scan_landscape(p, s);
  out.best = select_optimum(out.coarse, s.region_band);
  if (s.fine_resolution <= 0.0) return out;

  // Refine around the coarse pick, then re-select over coarse + window.
  struct Cell {
    double chi1, chi3, metric, area;
  };
  std::vector<Cell> cells;
  for (size_t i = 0; i < out.coarse.chi1_grid.size(); ++i)
    for (size_t j = 0; j < out.coarse.chi3_grid.size(); ++j)
      if (std::isfinite(out.coarse.metric(i, j)))
        cells.push_back({out.coarse.chi1_grid[i], out.coarse.chi3_grid[j],
                         out.coarse.metric(i, j), out.coarse.area(i, j)});

  std::vector<std::pair<double, double>> window;
  const double r = s.resolution, f = s.fine_resolution;
  for (double chi1 = out.best.chi1 - r; chi1 <= out.best.chi1 + r + 1e-12; chi1 += f) {
    if (chi1 < 0.0 || chi1 > p.chi0 || std::abs(chi1 - 0.5 * kPi) < 1e-9) continue;
    for (double chi3 = out.best.chi3 - r; chi3 <= out.best.chi3 + r + 1e-12; chi3 += f) {
      if (chi3 < p.chi0 || chi3 > kPi || std::abs(chi3 - 0.5 * kPi) < 1e-9) continue;
      window.push_back({chi1, chi3});
    }
  }
  std::vector<Cell> fine(window.size(),
                         {0, 0, std::numeric_limits<double>::quiet_NaN(), 0});
  parallel_for(window.size(), s.threads, [&](size_t k) {
    try {
      const auto rs = synth_five_segment_robust(p, window[k].first, window[k].second, s);
      fine[k] = {window[k].first, window[k].second, rs.metric,
                 rs.synth.schedule.total_area()};
    } catch (const std::invalid_argument&) {
    }
  });
  for (const auto& c : fine)
    if (std::isfinite(c.metric)) cells.push_back(c);

  double min_metric = std::numeric_limits<double>::infinity();
  for (const auto& c : cells) min_metric = std::min(min_metric, c.metric);
  const double cutoff = min_metric * std::max(s.region_band, 1.0);
  Optimum best;
  for (const auto& c : cells) {
    if (c.metric > cutoff) continue;
    if (!std::isfinite(best.metric) || c.area < best.area - 1e-12 ||
        (std::abs(c.area - best.area) <= 1e-12 && c.metric < best.metric)) {
      best = {c.chi1, c.chi3, c.metric, c.area};
    }
  }
  out.best = best;
  return out;
}

Chi2Scan scan_four_segment(const GateParams& p, const ScanSettings& s) {
  p.validate();
  Chi2Scan scan;
  scan.chi2_grid = scan_grid(p.chi0, kPi, s.resolution);
  scan.metric.assign(scan.chi2_grid.size(), std::numeric_limits<double>::quiet_NaN());
  const Mat2 target = gate_unitary(p);
  for (size_t i = 0; i < scan.chi2_grid.size(); ++i) {
    try {
      const auto traj = four_segment_trajectory(p, scan.chi2_grid[i]);
      const auto sched = synth_trajectory(traj, s.omega_max, s.envelope);
      scan.metric[i] = schedule_metric(sched, target, s);
      if (!std::isfinite(scan.best_metric) || scan.metric[i] < scan.best_metric) {
        scan.best_metric = scan.metric[i];
        scan.best_chi2 = scan.chi2_grid[i];
      }
    } catch (const DegenerateLoopError&) {
    } catch (const SingularDriftError&) {
    }
  }
  return scan;
}

std::string landscape_to_csv(const Landscape& l) {
  std::string out = "chi1,chi3,infidelity,area\n";
  char line[128];
  for (size_t i = 0; i < l.chi1_grid.size(); ++i) {
    for (size_t j = 0; j < l.chi3_grid.size(); ++j) {
      const double m = l.metric(i, j);
      if (!std::isfinite(m)) continue;
      std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g\n", l.chi1_grid[i],
                    l.chi3_grid[j], m, l.area(i, j));
      out += line;
    }
  }
  return out;
}

}  // namespace geotraj
