#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on
// x86-64, an AVX2 variant chosen at runtime. The variants are written to
// give bit-identical results: same per-lane accumulation order, no fused
// multiply-add.

#include <cstddef>
#include <span>
#include <string_view>

#include "qis/resonance_shape.hpp"

namespace qis::simd {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend backend);
bool backend_available(Backend backend);

/// Backend in use. Defaults to the best available one; the QIS_SIMD
/// environment variable ("scalar" or "avx2") overrides the default.
Backend active_backend();
/// Throws std::invalid_argument if the backend is not available.
void set_backend(Backend backend);

struct Moments {
  double model_dot_data = 0.0;
  double model_sq = 0.0;
};

/// Σ m_j d_j and Σ m_j² for the unit-amplitude resonance model m evaluated
/// at angular frequencies Ω_j with centre ω0 and coupling kappa.
Moments resonance_moments(std::span<const double> angular_freqs, std::span<const double> data,
                          double omega0, double kappa, ResonanceShape shape);

/// out[r * P + j] = Σ_n weights[r * Q + n] / (points[j] − poles[n]) over the
/// poles with |points[j] − poles[n]| >= exclusion_radius, for r < rows, with
/// P = points.size() and Q = poles.size().
void reciprocal_sums(std::span<const double> poles, std::span<const double> weights,
                     std::size_t rows, std::span<const double> points, double exclusion_radius,
                     std::span<double> out);

namespace scalar {
Moments resonance_moments(std::span<const double> angular_freqs, std::span<const double> data,
                          double omega0, double kappa, ResonanceShape shape);
void reciprocal_sums(std::span<const double> poles, std::span<const double> weights,
                     std::size_t rows, std::span<const double> points, double exclusion_radius,
                     std::span<double> out);
}  // namespace scalar

namespace avx2 {
Moments resonance_moments(std::span<const double> angular_freqs, std::span<const double> data,
                          double omega0, double kappa, ResonanceShape shape);
void reciprocal_sums(std::span<const double> poles, std::span<const double> weights,
                     std::size_t rows, std::span<const double> points, double exclusion_radius,
                     std::span<double> out);
}  // namespace avx2

}  // namespace qis::simd
