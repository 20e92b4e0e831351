#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qis/simd/kernels.hpp"

namespace qis::simd {

namespace {

Backend detect_default() {
  Backend best = backend_available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
  if (const char* env = std::getenv("QIS_SIMD")) {
    const std::string want(env);
    if (want == "scalar") {
      return Backend::Scalar;
    }
    if (want == "avx2" && backend_available(Backend::Avx2)) {
      return Backend::Avx2;
    }
  }
  return best;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect_default()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend backend) {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

bool backend_available(Backend backend) {
  if (backend == Backend::Scalar) {
    return true;
  }
#if defined(QIS_HAVE_AVX2_KERNELS)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw std::invalid_argument("SIMD backend not available: " +
                                std::string(backend_name(backend)));
  }
  current().store(backend, std::memory_order_relaxed);
}

Moments resonance_moments(std::span<const double> angular_freqs, std::span<const double> data,
                          double omega0, double kappa, ResonanceShape shape) {
#if defined(QIS_HAVE_AVX2_KERNELS)
  if (active_backend() == Backend::Avx2) {
    return avx2::resonance_moments(angular_freqs, data, omega0, kappa, shape);
  }
#endif
  return scalar::resonance_moments(angular_freqs, data, omega0, kappa, shape);
}

void reciprocal_sums(std::span<const double> poles, std::span<const double> weights,
                     std::size_t rows, std::span<const double> points, double exclusion_radius,
                     std::span<double> out) {
#if defined(QIS_HAVE_AVX2_KERNELS)
  if (active_backend() == Backend::Avx2) {
    avx2::reciprocal_sums(poles, weights, rows, points, exclusion_radius, out);
    return;
  }
#endif
  scalar::reciprocal_sums(poles, weights, rows, points, exclusion_radius, out);
}

}  // namespace qis::simd
