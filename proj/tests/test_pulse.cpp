#include <doctest.h>

#include <cmath>
#include <random>

#include "geotraj/pulse.hpp"

using namespace geotraj;

namespace {

PulseSchedule square_drive(double area) {
  PulseSchedule s;
  s.omega_max = 1.0;
  s.segments.push_back(make_segment(area, Envelope::Square, 1.0, 0.0, 0.0, 0.0));
  return s;
}

}  // namespace

TEST_SUITE("pulse") {

TEST_CASE("sample_hamiltonian of a plain square drive") {
  const auto s = square_drive(kPi);
  const Mat2 h = sample_hamiltonian(s, 0.5);
  CHECK(h(0, 0) == Complex(0.0, 0.0));
  CHECK(h(0, 1) == Complex(0.5, 0.0));
  CHECK(h(1, 0) == Complex(0.5, 0.0));
}

TEST_CASE("detuning error enters as delta * omega_max") {
  const auto s = square_drive(kPi);
  ErrorModel err;
  err.delta = 0.1;
  const Mat2 h = sample_hamiltonian(s, 0.5, err);
  CHECK(h(0, 0).real() == doctest::Approx(-0.05).epsilon(1e-12));
  CHECK(h(1, 1).real() == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(h(0, 1) == Complex(0.5, 0.0));
}

TEST_CASE("sine envelope peaks at the segment midpoint") {
  PulseSchedule s;
  s.omega_max = 1.0;
  s.segments.push_back(make_segment(2.0 / kPi, Envelope::Sine, 1.0, 0.0, 0.0, 0.0));
  CHECK(s.segments[0].duration == doctest::Approx(1.0).epsilon(1e-12));
  const Mat2 h = sample_hamiltonian(s, 0.5);
  CHECK(std::abs(h(0, 1)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sampling outside the schedule domain throws") {
  const auto s = square_drive(kPi);
  CHECK_THROWS_AS(s.sample(-0.5), std::domain_error);
  CHECK_THROWS_AS(s.sample(s.total_time() + 0.5), std::domain_error);
}

TEST_CASE("segment durations follow the fixed-peak rule") {
  CHECK(segment_duration(kPi, Envelope::Square, 2.0) == doctest::Approx(0.5 * kPi));
  CHECK(segment_duration(kPi, Envelope::Sine, 2.0) ==
        doctest::Approx(0.25 * kPi * kPi).epsilon(1e-12));
  CHECK(segment_duration(0.0, Envelope::Sine, 2.0) == 0.0);
  CHECK_THROWS_AS(make_segment(-1.0, Envelope::Sine, 1.0, 0.0, 0.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("conventional X_pi matches the closed form") {
  const auto s = synth_conventional({kPi, 0.0}, 1.0);
  Mat2 expect;
  expect << 0, -kI, -kI, 0;
  CHECK(max_abs(Mat(propagate_schedule(s, {}, 40000) - expect)) < 1e-8);
  CHECK(max_abs(Mat(conventional_unitary({kPi, 0.0}) - expect)) < 1e-14);
}

TEST_CASE("conventional 2pi rotation is minus identity") {
  const auto s = synth_conventional({2.0 * kPi, 0.0}, 1.0);
  CHECK(max_abs(Mat(propagate_schedule(s, {}, 40000) + Mat2::Identity())) < 1e-8);
}

TEST_CASE("conventional (pi/2, pi/2) closed form") {
  const double r = std::sqrt(0.5);
  Mat2 expect;
  expect << r, -r, r, r;
  CHECK(max_abs(Mat(conventional_unitary({0.5 * kPi, 0.5 * kPi}) - expect)) < 1e-14);
}

TEST_CASE("zero-angle conventional gate is an empty schedule") {
  const auto s = synth_conventional({0.0, 0.3}, 1.0);
  CHECK(s.empty());
  CHECK(max_abs(Mat(propagate_schedule(s) - Mat2::Identity())) < 1e-14);
}

TEST_CASE("random resonant rotations match the closed form for both envelopes") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> theta(0.1, 2.0 * kPi);
  std::uniform_real_distribution<double> phi(-kPi, kPi);
  for (int trial = 0; trial < 25; ++trial) {
    const ConventionalGateSpec spec{theta(rng), phi(rng)};
    for (Envelope env : {Envelope::Sine, Envelope::Square}) {
      const auto s = synth_conventional(spec, 1.3, env);
      CHECK(max_abs(Mat(propagate_schedule(s, {}, 40000) - conventional_unitary(spec))) <
            1e-8);
    }
  }
}

TEST_CASE("composite table entries") {
  const auto h = conventional_composite(GateName::H);
  REQUIRE(h.size() == 2);
  CHECK(h[0].theta_c == doctest::Approx(kPi));
  CHECK(h[0].phi_c == 0.0);
  CHECK(h[1].theta_c == doctest::Approx(0.5 * kPi));
  CHECK(h[1].phi_c == doctest::Approx(-0.5 * kPi));

  const auto i = conventional_composite(GateName::I);
  REQUIRE(i.size() == 1);
  CHECK(i[0].theta_c == doctest::Approx(2.0 * kPi));

  const auto mx = conventional_composite(GateName::mXpi2);
  REQUIRE(mx.size() == 1);
  CHECK(mx[0].phi_c == doctest::Approx(kPi));
}

TEST_CASE("composite H matches the Hadamard up to a global phase") {
  const auto s = synth_conventional_composite(GateName::H, 1.0);
  const double r = std::sqrt(0.5);
  Mat2 had;
  had << r, r, r, -r;
  CHECK(distance_up_to_phase(propagate_schedule(s, {}, 40000), had) < 1e-8);
}

TEST_CASE("amplitude error also scales a tied detuning law") {
  PulseSchedule s;
  s.omega_max = 1.0;
  s.segments.push_back(make_segment(kPi, Envelope::Square, 1.0, 0.2, 0.0, -0.5));
  ErrorModel err;
  err.epsilon = 0.1;
  const PulseSample p = s.sample(0.5, err);
  CHECK(p.omega == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(p.delta == doctest::Approx(-0.55).epsilon(1e-12));
}

TEST_CASE("phase ramp tracks the nominal accumulated area") {
  PulseSchedule s;
  s.omega_max = 1.0;
  s.segments.push_back(make_segment(kPi, Envelope::Square, 1.0, 0.3, 2.0, 0.0));
  ErrorModel err;
  err.epsilon = 0.25;
  const PulseSample p = s.sample(1.0, err);
  CHECK(p.phi == doctest::Approx(0.3 + 2.0 * 1.0).epsilon(1e-12));
}

TEST_CASE("schedule serialization round-trips exactly") {
  PulseSchedule s;
  s.omega_max = 1.75;
  s.segments.push_back(make_segment(0.3, Envelope::Sine, 1.75, 0.1, -2.5, 0.7));
  s.segments.push_back(make_segment(1.2, Envelope::Square, 1.75, -0.4, 0.0, 0.0));
  s.drag_alpha = 2000.0;
  s.drag_quad = 0.9;
  s.drag_stark = 1.4;
  const PulseSchedule t = schedule_from_json(schedule_to_json(s));
  CHECK(t.omega_max == s.omega_max);
  CHECK(t.drag_alpha == s.drag_alpha);
  CHECK(t.drag_quad == s.drag_quad);
  CHECK(t.drag_stark == s.drag_stark);
  REQUIRE(t.segments.size() == s.segments.size());
  for (size_t i = 0; i < s.segments.size(); ++i) {
    CHECK(t.segments[i].area == s.segments[i].area);
    CHECK(t.segments[i].duration == s.segments[i].duration);
    CHECK(t.segments[i].phi_base == s.segments[i].phi_base);
    CHECK(t.segments[i].slope_factor == s.segments[i].slope_factor);
    CHECK(t.segments[i].detune_factor == s.segments[i].detune_factor);
    CHECK(t.segments[i].envelope == s.segments[i].envelope);
  }
  CHECK(schedule_to_json(t) == schedule_to_json(s));
}

TEST_CASE("concat requires matching peak amplitudes") {
  const auto a = square_drive(kPi);
  auto b = square_drive(kPi);
  CHECK(concat(a, b).segments.size() == 2);
  b.omega_max = 2.0;
  CHECK_THROWS_AS(concat(a, b), std::invalid_argument);
}

TEST_CASE("drag terms vanish when no correction is set") {
  const auto s = square_drive(kPi);
  const auto d = drag_terms(s, s.sample(0.5));
  CHECK(d.quad == 0.0);
  CHECK(d.delta_shift == 0.0);
}

}  // TEST_SUITE
