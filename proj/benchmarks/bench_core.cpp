#include <benchmark/benchmark.h>

#include "geotraj/geo.hpp"
#include "geotraj/optimizer.hpp"
#include "geotraj/transmon.hpp"
#include "geotraj/twoqubit.hpp"

using namespace geotraj;

static void BM_MatExp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Mat a = Mat::Random(n, n);
  a = Mat(0.5 * (a + a.adjoint()));
  const Mat arg = -kI * a;
  for (auto _ : state) benchmark::DoNotOptimize(mat_exp(arg));
}
BENCHMARK(BM_MatExp)->Arg(2)->Arg(4)->Arg(6)->Arg(16);

static void BM_PropagateFiveSegment(benchmark::State& state) {
  const auto synth =
      synth_five_segment(geometric_gate_params(GateName::H), 0.05 * kPi, 0.73 * kPi, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(propagate_schedule(synth.schedule, {}, 500));
}
BENCHMARK(BM_PropagateFiveSegment);

static void BM_LandscapeCell(benchmark::State& state) {
  const GateParams gp = geometric_gate_params(GateName::H);
  const Mat2 target = gate_unitary(gp);
  for (auto _ : state) {
    const auto synth = synth_five_segment(gp, 0.1 * kPi, 0.7 * kPi, 1.0);
    ErrorModel err;
    err.delta = 0.1;
    benchmark::DoNotOptimize(
        gate_fidelity(target, propagate_schedule(synth.schedule, err, 500)));
  }
}
BENCHMARK(BM_LandscapeCell);

static void BM_OpenSystemFidelity(benchmark::State& state) {
  const auto synth = synth_five_segment(geometric_gate_params(GateName::H), 0.05 * kPi,
                                        0.73 * kPi, 2.0 * kPi * 21.0);
  TransmonParams p;
  const Mat2 target = gate_unitary(geometric_gate_params(GateName::H));
  for (auto _ : state)
    benchmark::DoNotOptimize(gate_fidelity_open(synth.schedule, target, p));
}
BENCHMARK(BM_OpenSystemFidelity);

static void BM_TwoQubitCell(benchmark::State& state) {
  TwoQubitParams p;
  SubspaceSelect sub{SubspaceKind::SingleExcitation, 0.0};
  FullSimSettings s;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_full(TwoQubitGate::iSWAP, 0.27 * kPi, 0.73 * kPi,
                                           p, sub.resonant_nu(p), 1.2, s));
}
BENCHMARK(BM_TwoQubitCell);

BENCHMARK_MAIN();
