#include <array>
#include <cmath>
#include <stdexcept>

#include "model_terms.hpp"
#include "qis/simd/kernels.hpp"

namespace qis::simd::scalar {

using detail::kLanes;

Moments resonance_moments(std::span<const double> angular_freqs, std::span<const double> data,
                          double omega0, double kappa, ResonanceShape shape) {
  if (angular_freqs.size() != data.size()) {
    throw std::invalid_argument("resonance_moments: size mismatch");
  }
  std::array<double, kLanes> dot{};
  std::array<double, kLanes> sq{};
  const double omega0_sq = omega0 * omega0;
  const double kappa4 = 4.0 * kappa;
  const double kappa16_sq = kappa4 * kappa4;
  const double kappa2_sq = (2.0 * kappa) * (2.0 * kappa);
  for (std::size_t j = 0; j < data.size(); ++j) {
    const double q = shape == ResonanceShape::DampedOscillation
                         ? detail::damped_model_sq(angular_freqs[j], omega0_sq, kappa4, kappa16_sq)
                         : detail::lorentz_model_sq(angular_freqs[j], omega0, kappa2_sq);
    const double m = std::sqrt(q);
    const std::size_t lane = j % kLanes;
    dot[lane] += m * data[j];
    sq[lane] += q;
  }
  return {(dot[0] + dot[1]) + (dot[2] + dot[3]), (sq[0] + sq[1]) + (sq[2] + sq[3])};
}

void reciprocal_sums(std::span<const double> poles, std::span<const double> weights,
                     std::size_t rows, std::span<const double> points, double exclusion_radius,
                     std::span<double> out) {
  const std::size_t np = poles.size();
  const std::size_t nx = points.size();
  if (weights.size() != rows * np || out.size() != rows * nx) {
    throw std::invalid_argument("reciprocal_sums: size mismatch");
  }
  for (std::size_t j = 0; j < nx; ++j) {
    for (std::size_t r = 0; r < rows; ++r) {
      out[r * nx + j] = 0.0;
    }
    for (std::size_t n = 0; n < np; ++n) {
      const double d = points[j] - poles[n];
      if (!(std::abs(d) >= exclusion_radius)) {
        continue;
      }
      const double inv = 1.0 / d;
      for (std::size_t r = 0; r < rows; ++r) {
        out[r * nx + j] += weights[r * np + n] * inv;
      }
    }
  }
}

}  // namespace qis::simd::scalar
