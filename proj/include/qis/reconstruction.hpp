#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qis/interleave_kernel.hpp"
#include "qis/sampling.hpp"

namespace qis {

/// Signal values on the uniform grid start + i * step.
struct DenseRendering {
  double start = 0.0;
  double step = 0.0;
  std::vector<double> values;

  double time(std::size_t i) const { return start + step * static_cast<double>(i); }
};

/// Continuous-time signal rebuilt from a finite set of samples. The infinite
/// interpolation sums are truncated to the available samples, so accuracy is
/// best in the middle of the window.
class ReconstructedSignal {
 public:
  /// Direct evaluation of the truncated interpolation sum.
  double operator()(double t) const;

  /// Evaluates at many times via the trigonometric factorisation of the
  /// kernels; agrees with operator() to rounding.
  std::vector<double> render(std::span<const double> times) const;

  /// Uniform rendering over the window with the given step.
  DenseRendering render_uniform(double step) const;

  const SamplingPlan& plan() const { return plan_; }
  /// Series at t_n (all samples for sinc plans).
  const SampleSet& primary_series() const { return primary_; }
  /// Series at t_n + k; empty for sinc plans.
  const SampleSet& offset_series() const { return offset_; }
  /// Interleave kernel; empty for sinc plans.
  const std::optional<InterleaveKernelParams>& kernel() const { return kernel_; }

  double window_start() const { return window_start_; }
  double window_end() const { return window_end_; }

 private:
  friend ReconstructedSignal sinc_reconstruct(const SampleSet&, const SamplingPlan&);
  friend ReconstructedSignal interleaved_reconstruct(const SampleSet&, const SampleSet&,
                                                     const SamplingPlan&);
  ReconstructedSignal(SamplingPlan plan, SampleSet primary, SampleSet offset,
                      std::optional<InterleaveKernelParams> kernel);

  std::vector<double> render_sinc(std::span<const double> times) const;
  std::vector<double> render_interleaved(std::span<const double> times) const;

  SamplingPlan plan_;
  SampleSet primary_;
  SampleSet offset_;
  std::optional<InterleaveKernelParams> kernel_;
  double window_start_ = 0.0;
  double window_end_ = 0.0;
};

/// x(t) = Σ x[n] sinc((t − t_n)/Δt). Throws PlanMismatch unless the plan is a
/// sinc plan whose times match the samples.
ReconstructedSignal sinc_reconstruct(const SampleSet& samples, const SamplingPlan& plan);
ReconstructedSignal sinc_reconstruct(const MeasurementRecord& record, const SamplingPlan& plan);

/// x(t) = Σ x_0[n] S(t − t_n) + x_k[n] S(−t + t_n + k).
ReconstructedSignal interleaved_reconstruct(const SampleSet& series_a, const SampleSet& series_b,
                                            const SamplingPlan& plan);
ReconstructedSignal interleaved_reconstruct(const MeasurementRecord& series_a,
                                            const MeasurementRecord& series_b,
                                            const SamplingPlan& plan);

/// Picks the reconstruction for plan.scheme(); interleaved samples are
/// given merged in time order.
ReconstructedSignal reconstruct(const SampleSet& merged, const SamplingPlan& plan);

/// CSV with columns time,amplitude.
void write_rendering_csv(std::ostream& out, const DenseRendering& rendering);

}  // namespace qis
