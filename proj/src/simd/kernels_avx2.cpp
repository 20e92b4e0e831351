#include <immintrin.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "model_terms.hpp"
#include "qis/simd/kernels.hpp"

namespace qis::simd::avx2 {

using detail::kLanes;
using detail::kMaxRows;

namespace {

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

}  // namespace

Moments resonance_moments(std::span<const double> angular_freqs, std::span<const double> data,
                          double omega0, double kappa, ResonanceShape shape) {
  if (angular_freqs.size() != data.size()) {
    throw std::invalid_argument("resonance_moments: size mismatch");
  }
  const std::size_t n = data.size();
  const std::size_t body = n - n % kLanes;
  const double omega0_sq = omega0 * omega0;
  const double kappa4 = 4.0 * kappa;
  const double kappa16_sq = kappa4 * kappa4;
  const double kappa2_sq = (2.0 * kappa) * (2.0 * kappa);

  __m256d dot = _mm256_setzero_pd();
  __m256d sq = _mm256_setzero_pd();
  if (shape == ResonanceShape::DampedOscillation) {
    const __m256d w0sq = _mm256_set1_pd(omega0_sq);
    const __m256d k4 = _mm256_set1_pd(kappa4);
    const __m256d k16 = _mm256_set1_pd(kappa16_sq);
    for (std::size_t j = 0; j < body; j += kLanes) {
      const __m256d w = _mm256_loadu_pd(angular_freqs.data() + j);
      const __m256d w2 = _mm256_mul_pd(w, w);
      const __m256d diff = _mm256_sub_pd(w0sq, w2);
      const __m256d damp = _mm256_mul_pd(k4, w);
      const __m256d den = _mm256_add_pd(_mm256_mul_pd(diff, diff), _mm256_mul_pd(damp, damp));
      const __m256d num = _mm256_add_pd(w2, k16);
      const __m256d q = _mm256_div_pd(num, den);
      const __m256d m = _mm256_sqrt_pd(q);
      dot = _mm256_add_pd(dot, _mm256_mul_pd(m, _mm256_loadu_pd(data.data() + j)));
      sq = _mm256_add_pd(sq, q);
    }
  } else {
    const __m256d w0 = _mm256_set1_pd(omega0);
    const __m256d k2 = _mm256_set1_pd(kappa2_sq);
    const __m256d one = _mm256_set1_pd(1.0);
    for (std::size_t j = 0; j < body; j += kLanes) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(angular_freqs.data() + j), w0);
      const __m256d den = _mm256_add_pd(k2, _mm256_mul_pd(d, d));
      const __m256d q = _mm256_div_pd(one, den);
      const __m256d m = _mm256_sqrt_pd(q);
      dot = _mm256_add_pd(dot, _mm256_mul_pd(m, _mm256_loadu_pd(data.data() + j)));
      sq = _mm256_add_pd(sq, q);
    }
  }

  alignas(32) std::array<double, kLanes> dot_l{};
  alignas(32) std::array<double, kLanes> sq_l{};
  _mm256_store_pd(dot_l.data(), dot);
  _mm256_store_pd(sq_l.data(), sq);
  for (std::size_t j = body; j < n; ++j) {
    const double q = shape == ResonanceShape::DampedOscillation
                         ? detail::damped_model_sq(angular_freqs[j], omega0_sq, kappa4, kappa16_sq)
                         : detail::lorentz_model_sq(angular_freqs[j], omega0, kappa2_sq);
    const double m = std::sqrt(q);
    dot_l[j % kLanes] += m * data[j];
    sq_l[j % kLanes] += q;
  }
  return {(dot_l[0] + dot_l[1]) + (dot_l[2] + dot_l[3]), (sq_l[0] + sq_l[1]) + (sq_l[2] + sq_l[3])};
}

void reciprocal_sums(std::span<const double> poles, std::span<const double> weights,
                     std::size_t rows, std::span<const double> points, double exclusion_radius,
                     std::span<double> out) {
  const std::size_t np = poles.size();
  const std::size_t nx = points.size();
  if (weights.size() != rows * np || out.size() != rows * nx) {
    throw std::invalid_argument("reciprocal_sums: size mismatch");
  }
  const std::size_t body = nx - nx % kLanes;
  const __m256d radius = _mm256_set1_pd(exclusion_radius);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);

  for (std::size_t j = 0; j < body; j += kLanes) {
    const __m256d p = _mm256_loadu_pd(points.data() + j);
    for (std::size_t r0 = 0; r0 < rows; r0 += kMaxRows) {
      const std::size_t nr = std::min(kMaxRows, rows - r0);
      __m256d acc[kMaxRows];
      for (auto& a : acc) {
        a = zero;
      }
      for (std::size_t n = 0; n < np; ++n) {
        const __m256d d = _mm256_sub_pd(p, _mm256_set1_pd(poles[n]));
        const __m256d keep = _mm256_cmp_pd(abs_pd(d), radius, _CMP_GE_OQ);
        const __m256d inv = _mm256_blendv_pd(zero, _mm256_div_pd(one, d), keep);
        for (std::size_t r = 0; r < nr; ++r) {
          const __m256d w = _mm256_set1_pd(weights[(r0 + r) * np + n]);
          acc[r] = _mm256_add_pd(acc[r], _mm256_mul_pd(w, inv));
        }
      }
      for (std::size_t r = 0; r < nr; ++r) {
        _mm256_storeu_pd(out.data() + (r0 + r) * nx + j, acc[r]);
      }
    }
  }
  if (body < nx) {
    // Tail points through the reference loop on a sub-problem.
    const std::size_t tail = nx - body;
    std::array<double, kLanes * kMaxRows> buf{};
    for (std::size_t r0 = 0; r0 < rows; r0 += kMaxRows) {
      const std::size_t nr = std::min(kMaxRows, rows - r0);
      scalar::reciprocal_sums(poles, weights.subspan(r0 * np, nr * np), nr,
                              points.subspan(body), exclusion_radius,
                              std::span<double>(buf.data(), nr * tail));
      for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t j = 0; j < tail; ++j) {
          out[(r0 + r) * nx + body + j] = buf[r * tail + j];
        }
      }
    }
  }
}

}  // namespace qis::simd::avx2
