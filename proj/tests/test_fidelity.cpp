#include <doctest.h>

#include <cmath>

#include "geotraj/fidelity.hpp"
#include "geotraj/geo.hpp"
#include "geotraj/optimizer.hpp"

using namespace geotraj;

TEST_SUITE("fidelity") {

TEST_CASE("gate_fidelity basics") {
  Mat2 xpi;
  xpi << 0, -kI, -kI, 0;
  CHECK(gate_fidelity(xpi, xpi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gate_fidelity(xpi, Mat2::Identity()) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("modulus convention is phase-invariant, real-part is not") {
  Mat2 u;
  u << 1, 0, 0, 1;
  const Mat v = std::exp(Complex(0.0, 0.4)) * u;
  CHECK(gate_fidelity(u, v) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gate_fidelity(u, v, FidelityConvention::RealPart) ==
        doctest::Approx(std::cos(0.4)).epsilon(1e-12));
}

TEST_CASE("dimension mismatch throws") {
  CHECK_THROWS(gate_fidelity(Mat::Identity(2, 2), Mat::Identity(3, 3)));
}

TEST_CASE("default delta grid brackets zero symmetrically") {
  const auto grid = default_delta_grid();
  REQUIRE(grid.size() == 41);
  CHECK(grid.front() == doctest::Approx(-0.1));
  CHECK(grid.back() == doctest::Approx(0.1));
  CHECK(std::abs(grid[20]) < 1e-15);
}

TEST_CASE("sensitivity at zero error is numerically zero") {
  const GateParams p{0.5 * kPi, kPi, 0.5 * kPi};
  const auto synth = synth_five_segment(p, 0.25 * kPi, 0.75 * kPi, 1.0);
  const auto curve = sensitivity_curve(synth.schedule, gate_unitary(p),
                                       ErrorKind::Detuning, {0.0});
  CHECK(curve.infidelity[0] < 1e-8);
}

TEST_CASE("conventional identity pulse is symmetric in the detuning error") {
  const auto s = synth_conventional({2.0 * kPi, 0.0}, 1.0);
  const auto grid = default_delta_grid(0.1, 21);
  const auto curve =
      sensitivity_curve(s, Mat2(-Mat2::Identity()), ErrorKind::Detuning, grid);
  CHECK(curve.infidelity.front() > 0.0);
  for (size_t i = 0; i < curve.infidelity.size() / 2; ++i) {
    const double mirror = curve.infidelity[curve.infidelity.size() - 1 - i];
    CHECK(curve.infidelity[i] == doctest::Approx(mirror).epsilon(1e-8));
  }
}

TEST_CASE("geometric X_pi dominates conventional X_pi in the detuning error") {
  const GateParams p{0.5 * kPi, kPi, 0.5 * kPi};
  ScanSettings probe;
  probe.envelope = Envelope::Sine;
  const auto geo = synth_five_segment_robust(p, 0.48 * kPi, 0.52 * kPi, probe).synth;
  const auto conv = synth_conventional({kPi, 0.0}, 1.0);
  const auto grid = default_delta_grid();
  const auto a = sensitivity_curve(geo.schedule, gate_unitary(p), ErrorKind::Detuning,
                                   grid, "Xpi_g");
  const auto b = sensitivity_curve(conv, conventional_unitary({kPi, 0.0}),
                                   ErrorKind::Detuning, grid, "Xpi_c");
  const auto rep = compare_curves(a, b);
  CHECK(rep.full_dominance);
}

TEST_CASE("compare_curves trivial orders") {
  SensitivityCurve a, b;
  a.delta_grid = b.delta_grid = {0.0, 0.1, 0.2};
  a.infidelity = {0.0, 0.0, 0.0};
  b.infidelity = {0.1, 0.2, 0.3};
  const auto zeros_vs_pos = compare_curves(a, b);
  CHECK(zeros_vs_pos.full_dominance);
  const auto self = compare_curves(b, b);
  CHECK(self.full_dominance);
  CHECK(self.max_ratio_b_over_a == doctest::Approx(1.0));
  CHECK(self.min_ratio_b_over_a == doctest::Approx(1.0));
  CHECK(self.crossovers.empty());
}

TEST_CASE("compare_curves rejects mismatched grids") {
  SensitivityCurve a, b;
  a.delta_grid = {0.0, 0.1};
  b.delta_grid = {0.0, 0.2};
  a.infidelity = b.infidelity = {0.0, 0.0};
  CHECK_THROWS(compare_curves(a, b));
}

TEST_CASE("csv outputs carry the expected headers") {
  SensitivityCurve c;
  c.gate_name = "X";
  c.delta_grid = {0.0};
  c.infidelity = {0.5};
  CHECK(curve_to_csv(c).rfind("delta,infidelity", 0) == 0);
  CHECK(overlay_to_csv(c, c, "a", "b").rfind("delta,a,b", 0) == 0);
}

}  // TEST_SUITE
