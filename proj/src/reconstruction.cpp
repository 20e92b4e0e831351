#include "qis/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "format.hpp"
#include "qis/errors.hpp"
#include "qis/simd/kernels.hpp"

namespace qis {

namespace {

constexpr double kPi = std::numbers::pi;

// Poles closer than this fraction of Δt to an evaluation point are summed
// directly instead of through the factorised form.
constexpr double kExclusionFraction = 0.25;

void check_times(std::span<const double> got, std::span<const double> plan_times,
                 std::size_t first, std::size_t stride, const char* what) {
  std::size_t expected = 0;
  for (std::size_t i = first; i < plan_times.size(); i += stride) {
    ++expected;
  }
  if (got.size() != expected) {
    throw PlanMismatch(std::string(what) + ": expected " + std::to_string(expected) +
                       " samples, got " + std::to_string(got.size()));
  }
  for (std::size_t j = 0; j < got.size(); ++j) {
    const double want = plan_times[first + j * stride];
    if (std::abs(got[j] - want) > 1e-12 * std::max(1.0, std::abs(want))) {
      throw PlanMismatch(std::string(what) + ": sample time " + std::to_string(got[j]) +
                         " does not match plan time " + std::to_string(want));
    }
  }
}

void check_values(const SampleSet& s) {
  if (s.times.size() != s.values.size()) {
    throw PlanMismatch("sample times and values differ in length");
  }
}

// Indices of poles with !(|t − pole| >= radius), i.e. those the reciprocal
// sum kernel skips. Poles are sorted.
template <typename Fn>
void for_each_excluded(std::span<const double> poles, double t, double radius, Fn&& fn) {
  auto it = std::lower_bound(poles.begin(), poles.end(), t - 2.0 * radius);
  for (; it != poles.end() && *it <= t + 2.0 * radius; ++it) {
    if (!(std::abs(t - *it) >= radius)) {
      fn(static_cast<std::size_t>(it - poles.begin()));
    }
  }
}

}  // namespace

ReconstructedSignal::ReconstructedSignal(SamplingPlan plan, SampleSet primary, SampleSet offset,
                                         std::optional<InterleaveKernelParams> kernel)
    : plan_(std::move(plan)),
      primary_(std::move(primary)),
      offset_(std::move(offset)),
      kernel_(std::move(kernel)) {
  window_start_ = plan_.times().front();
  window_end_ = plan_.times().back();
}

double ReconstructedSignal::operator()(double t) const {
  double x = 0.0;
  if (!kernel_) {
    const double dt = plan_.interval();
    for (std::size_t n = 0; n < primary_.times.size(); ++n) {
      x += primary_.values[n] * normalized_sinc((t - primary_.times[n]) / dt);
    }
    return x;
  }
  for (std::size_t n = 0; n < primary_.times.size(); ++n) {
    x += primary_.values[n] * kernel_S(t - primary_.times[n], *kernel_);
  }
  for (std::size_t n = 0; n < offset_.times.size(); ++n) {
    x += offset_.values[n] * kernel_S(-t + offset_.times[n], *kernel_);
  }
  return x;
}

std::vector<double> ReconstructedSignal::render(std::span<const double> times) const {
  return kernel_ ? render_interleaved(times) : render_sinc(times);
}

std::vector<double> ReconstructedSignal::render_sinc(std::span<const double> times) const {
  // sin(π(t − p)/Δt) = sin(πt/Δt) cos(πp/Δt) − cos(πt/Δt) sin(πp/Δt)
  const double dt = plan_.interval();
  const double radius = kExclusionFraction * dt;
  const std::span<const double> poles = primary_.times;
  const std::size_t np = poles.size();
  std::vector<double> weights(2 * np);
  for (std::size_t n = 0; n < np; ++n) {
    const double arg = kPi * poles[n] / dt;
    weights[n] = primary_.values[n] * std::cos(arg);
    weights[np + n] = primary_.values[n] * std::sin(arg);
  }
  const std::size_t nx = times.size();
  std::vector<double> sums(2 * nx);
  simd::reciprocal_sums(poles, weights, 2, times, radius, sums);

  std::vector<double> out(nx);
  for (std::size_t j = 0; j < nx; ++j) {
    const double t = times[j];
    const double arg = kPi * t / dt;
    double x = dt / kPi * (std::sin(arg) * sums[j] - std::cos(arg) * sums[nx + j]);
    for_each_excluded(poles, t, radius, [&](std::size_t n) {
      x += primary_.values[n] * normalized_sinc((t - poles[n]) / dt);
    });
    out[j] = x;
  }
  return out;
}

std::vector<double> ReconstructedSignal::render_interleaved(std::span<const double> times) const {
  // Each kernel term is a difference of cos(c τ − φ)/(scale τ) pieces. With
  // τ = t − p (primary series) or τ = q − t (offset series) the cosine splits
  // into a factor depending on t alone times one depending on the pole, so
  // the sum over samples becomes a set of reciprocal sums.
  struct Piece {
    double freq;
    double phase;
    double coef;  // ±1 / scale
  };
  std::vector<Piece> pieces;
  for (const auto& term : kernel_->terms()) {
    pieces.push_back({term.a, term.phase, 1.0 / term.scale});
    pieces.push_back({term.b, term.phase, -1.0 / term.scale});
  }

  const double radius = kExclusionFraction * plan_.interval();
  const std::size_t nx = times.size();
  const std::size_t rows = 2 * pieces.size();
  std::vector<double> out(nx, 0.0);

  auto accumulate = [&](const SampleSet& series, bool offset_series) {
    const std::span<const double> poles = series.times;
    const std::size_t np = poles.size();
    std::vector<double> weights(rows * np);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      for (std::size_t n = 0; n < np; ++n) {
        const double arg = pieces[i].freq * poles[n];
        weights[(2 * i) * np + n] = series.values[n] * std::cos(arg);
        weights[(2 * i + 1) * np + n] = series.values[n] * std::sin(arg);
      }
    }
    std::vector<double> sums(rows * nx);
    simd::reciprocal_sums(poles, weights, rows, times, radius, sums);

    // Primary: cos(c(t − p) − φ) / (scale (t − p)).
    // Offset:  cos(c(t − q) + φ) / (−scale (t − q)).
    const double phase_sign = offset_series ? 1.0 : -1.0;
    const double coef_sign = offset_series ? -1.0 : 1.0;
    for (std::size_t j = 0; j < nx; ++j) {
      const double t = times[j];
      double x = 0.0;
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        const double arg = pieces[i].freq * t + phase_sign * pieces[i].phase;
        x += coef_sign * pieces[i].coef *
             (std::cos(arg) * sums[(2 * i) * nx + j] + std::sin(arg) * sums[(2 * i + 1) * nx + j]);
      }
      for_each_excluded(poles, t, radius, [&](std::size_t n) {
        const double tau = offset_series ? poles[n] - t : t - poles[n];
        x += series.values[n] * kernel_S(tau, *kernel_);
      });
      out[j] += x;
    }
  };
  accumulate(primary_, false);
  accumulate(offset_, true);
  return out;
}

DenseRendering ReconstructedSignal::render_uniform(double step) const {
  if (!(step > 0.0)) {
    throw EmptyWindow("rendering step must be positive");
  }
  const double span = window_end_ - window_start_;
  const auto n = static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = window_start_ + step * static_cast<double>(i);
  }
  return {window_start_, step, render(times)};
}

ReconstructedSignal sinc_reconstruct(const SampleSet& samples, const SamplingPlan& plan) {
  if (plan.scheme() != Scheme::Sinc) {
    throw PlanMismatch("sinc reconstruction needs a sinc plan");
  }
  check_values(samples);
  check_times(samples.times, plan.times(), 0, 1, "sinc reconstruction");
  return ReconstructedSignal(plan, samples, {}, std::nullopt);
}

ReconstructedSignal sinc_reconstruct(const MeasurementRecord& record, const SamplingPlan& plan) {
  return sinc_reconstruct(record.samples(), plan);
}

ReconstructedSignal interleaved_reconstruct(const SampleSet& series_a, const SampleSet& series_b,
                                            const SamplingPlan& plan) {
  if (plan.scheme() != Scheme::Interleaved) {
    throw PlanMismatch("interleaved reconstruction needs an interleaved plan");
  }
  check_values(series_a);
  check_values(series_b);
  check_times(series_a.times, plan.times(), 0, 2, "interleaved series t_n");
  check_times(series_b.times, plan.times(), 1, 2, "interleaved series t_n + k");
  auto kernel = make_kernel_params(plan.f_lower(), plan.bandwidth(), plan.offset());
  return ReconstructedSignal(plan, series_a, series_b, kernel);
}

ReconstructedSignal interleaved_reconstruct(const MeasurementRecord& series_a,
                                            const MeasurementRecord& series_b,
                                            const SamplingPlan& plan) {
  return interleaved_reconstruct(series_a.samples(), series_b.samples(), plan);
}

ReconstructedSignal reconstruct(const SampleSet& merged, const SamplingPlan& plan) {
  if (plan.scheme() == Scheme::Sinc) {
    return sinc_reconstruct(merged, plan);
  }
  auto [a, b] = split_series(merged, plan);
  return interleaved_reconstruct(a, b, plan);
}

void write_rendering_csv(std::ostream& out, const DenseRendering& rendering) {
  out << "time,amplitude\n";
  for (std::size_t i = 0; i < rendering.values.size(); ++i) {
    out << detail::fmt_double(rendering.time(i)) << ',' << detail::fmt_double(rendering.values[i])
        << '\n';
  }
}

}  // namespace qis
