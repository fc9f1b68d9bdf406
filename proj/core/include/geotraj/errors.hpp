#pragma once

namespace geotraj {

// Systematic-error injectors. All fields default to "no error"; only the
// fields explicitly set by a scan are active.
struct ErrorModel {
  // Fractional detuning drift: Delta(t) -> Delta(t) + delta * Omega_ref.
  double delta = 0.0;
  // Fractional amplitude error: Omega(t) -> (1 + epsilon) * Omega(t).
  // Applies to the physical drive before any detuning law tied to it.
  double epsilon = 0.0;
  // Static ZZ-crosstalk frequency shift (angular frequency), added to Delta.
  double zeta = 0.0;
  // Two-qubit detuning fraction: Delta' -> Delta' + delta_p * g'. Carried
  // here for bookkeeping; the effective model maps it onto `delta`.
  double delta_p = 0.0;

  bool any() const { return delta != 0.0 || epsilon != 0.0 || zeta != 0.0 || delta_p != 0.0; }
};

enum class ErrorKind { Detuning, Amplitude, ZZ };

}  // namespace geotraj
