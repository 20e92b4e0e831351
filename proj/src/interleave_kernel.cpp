#include "qis/interleave_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qis/errors.hpp"

namespace qis {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSingularSine = 1e-6;
constexpr double kSeriesRadius = 1e-7;

void check_band(double f_lower, double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw InvalidBand("bandwidth must be positive, got " + std::to_string(bandwidth));
  }
  if (!(f_lower >= 0.0) || !std::isfinite(f_lower)) {
    throw InvalidBand("lower band edge must be non-negative, got " + std::to_string(f_lower));
  }
}

double term_value(double t, const InterleaveKernelParams::Term& term) {
  const double a = term.a;
  const double b = term.b;
  if (std::abs(t) < kSeriesRadius) {
    // Taylor expansion of the numerator through t³ divided by scale · t.
    const double sin_phase = std::sin(term.phase);
    const double cos_phase = std::cos(term.phase);
    const double c1 = (a - b) * sin_phase;
    const double c2 = -0.5 * (a * a - b * b) * cos_phase;
    const double c3 = -(a * a * a - b * b * b) * sin_phase / 6.0;
    return (c1 + t * (c2 + t * c3)) / term.scale;
  }
  return (std::cos(a * t - term.phase) - std::cos(b * t - term.phase)) / (term.scale * t);
}

}  // namespace

double normalized_sinc(double x) {
  const double px = kPi * x;
  if (std::abs(px) < 1e-5) {
    return 1.0 - px * px / 6.0;
  }
  return std::sin(px) / px;
}

int interleave_order(double f_lower, double bandwidth) {
  check_band(f_lower, bandwidth);
  return static_cast<int>(std::floor(2.0 * f_lower / bandwidth)) + 1;
}

InterleaveKernelParams make_kernel_params(double f_lower, double bandwidth, double offset) {
  check_band(f_lower, bandwidth);
  if (!(offset > 0.0) || !(offset < 1.0 / bandwidth)) {
    throw InvalidPlan("interleave offset k must satisfy 0 < k < 1/B, got " +
                      std::to_string(offset));
  }
  InterleaveKernelParams p;
  p.f_lower_ = f_lower;
  p.bandwidth_ = bandwidth;
  p.offset_ = offset;
  p.order_ = interleave_order(f_lower, bandwidth);

  const double r = p.order_;
  const double two_pi = 2.0 * kPi;
  const InterleaveKernelParams::Term lower{two_pi * (r * bandwidth - f_lower),
                                           two_pi * f_lower, r * kPi * bandwidth * offset, 0.0};
  const InterleaveKernelParams::Term upper{two_pi * (f_lower + bandwidth),
                                           two_pi * (r * bandwidth - f_lower),
                                           (r + 1.0) * kPi * bandwidth * offset, 0.0};

  for (auto term : {lower, upper}) {
    if (std::abs(term.a - term.b) <= 1e-9 * two_pi * bandwidth) {
      continue;
    }
    const double s = std::sin(term.phase);
    if (std::abs(s) <= kSingularSine) {
      throw KernelSingular("interleave kernel singular: sin(" + std::to_string(term.phase) +
                           ") = " + std::to_string(s) + " for f_L=" + std::to_string(f_lower) +
                           ", B=" + std::to_string(bandwidth) + ", k=" + std::to_string(offset));
    }
    term.scale = two_pi * bandwidth * s;
    p.terms_[p.term_count_++] = term;
  }
  return p;
}

double kernel_S(double t, const InterleaveKernelParams& params) {
  double s = 0.0;
  for (const auto& term : params.terms()) {
    s += term_value(t, term);
  }
  return s;
}

double default_interleave_offset(double f_lower, double bandwidth) {
  check_band(f_lower, bandwidth);
  const double half = 0.5 / bandwidth;
  try {
    make_kernel_params(f_lower, bandwidth, half);
    return half;
  } catch (const KernelSingular&) {
    return 1.0 / (4.0 * (f_lower + 0.5 * bandwidth));
  }
}

double kernel_asymmetry(const InterleaveKernelParams& params, double periods,
                        std::size_t points) {
  const double span = periods * params.interval();
  double worst = 0.0;
  for (std::size_t i = 1; i <= points; ++i) {
    const double t = span * static_cast<double>(i) / static_cast<double>(points);
    worst = std::max(worst, std::abs(kernel_S(t, params) - kernel_S(-t, params)));
  }
  return worst;
}

}  // namespace qis
