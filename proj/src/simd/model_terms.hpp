#pragma once

#include <cmath>

// Shared scalar pieces of the kernels. Included by both kernel translation
// units so tails and reference agree operation by operation.

namespace qis::simd::detail {

constexpr std::size_t kLanes = 4;
constexpr std::size_t kMaxRows = 8;

// Squared unit-amplitude damped-oscillation model.
inline double damped_model_sq(double w, double omega0_sq, double kappa4, double kappa16_sq) {
  const double w2 = w * w;
  const double diff = omega0_sq - w2;
  const double damp = kappa4 * w;
  const double den = diff * diff + damp * damp;
  const double num = w2 + kappa16_sq;
  return num / den;
}

// Squared unit-amplitude Lorentzian.
inline double lorentz_model_sq(double w, double omega0, double kappa2_sq) {
  const double d = w - omega0;
  const double den = kappa2_sq + d * d;
  return 1.0 / den;
}

}  // namespace qis::simd::detail
