#pragma once

namespace qis {

enum class ResonanceShape {
  /// Magnitude of the one-sided transform of the damped r_z oscillation.
  DampedOscillation,
  /// amp / |2κ + i 2π (f − f0)|, for comparison.
  Lorentzian,
};

}  // namespace qis
