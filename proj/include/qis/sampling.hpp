#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qis/dynamics.hpp"

namespace qis {

enum class Scheme { Sinc, Interleaved };

std::string_view scheme_name(Scheme scheme);

/// Sample schedule for one characterization run. Sinc samples at
/// t_n = n/(2(f_L + B)), n = 1..M. Interleaved samples two series at
/// t_n = n/B and t_n + k, n = 1..M/2, stored merged in time order.
class SamplingPlan {
 public:
  Scheme scheme() const { return scheme_; }
  double f_lower() const { return f_lower_; }
  double bandwidth() const { return bandwidth_; }
  double f_upper() const { return f_lower_ + bandwidth_; }
  /// k for interleaved plans, 0 for sinc.
  double offset() const { return offset_; }
  /// Δt between consecutive samples of one series.
  double interval() const { return interval_; }
  std::size_t count() const { return times_.size(); }
  std::size_t repeats() const { return repeats_; }
  std::span<const double> times() const { return times_; }
  /// Time of the last sample, measured from preparation at t = 0.
  double observation_end() const { return times_.back(); }
  /// Samples per unit time over both series: 2(f_L + B) for sinc, 2B interleaved.
  double total_sample_rate() const;

  /// Same plan with a different number of measurements per point.
  SamplingPlan with_repeats(std::size_t repeats) const;

 private:
  friend SamplingPlan build_sinc_schedule(double, double, std::size_t, std::size_t);
  friend SamplingPlan build_interleaved_schedule(double, double, double, std::size_t,
                                                 std::size_t);

  Scheme scheme_ = Scheme::Sinc;
  double f_lower_ = 0.0;
  double bandwidth_ = 1.0;
  double offset_ = 0.0;
  double interval_ = 1.0;
  std::size_t repeats_ = 1;
  std::vector<double> times_;
};

SamplingPlan build_sinc_schedule(double f_lower, double bandwidth, std::size_t count,
                                 std::size_t repeats);

/// Throws OddM for odd `count` and KernelSingular when the interleave kernel
/// is not finite at this offset.
SamplingPlan build_interleaved_schedule(double f_lower, double bandwidth, double offset,
                                        std::size_t count, std::size_t repeats);

/// Sample values bound to times; the input to reconstruction.
struct SampleSet {
  std::vector<double> times;
  std::vector<double> values;
};

/// Counts of +1 outcomes out of n measurements at each sample time.
class MeasurementRecord {
 public:
  MeasurementRecord(std::vector<double> times, std::vector<std::uint32_t> counts,
                    std::uint32_t n);

  std::span<const double> times() const { return times_; }
  std::span<const std::uint32_t> counts() const { return counts_; }
  std::uint32_t n() const { return n_; }
  /// 2 counts / n − 1, in [−1, 1].
  std::span<const double> averages() const { return averages_; }
  SampleSet samples() const { return {times_, averages_}; }

 private:
  std::vector<double> times_;
  std::vector<std::uint32_t> counts_;
  std::uint32_t n_;
  std::vector<double> averages_;
};

/// Engine for one sample point: seeded from (seed, point index) only, so a
/// point's outcomes do not depend on the order points are simulated in.
std::mt19937_64 point_engine(std::uint64_t seed, std::uint64_t point_index);

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double unit_uniform(std::mt19937_64& engine);

/// N projective σz measurements per sample point, each on a freshly
/// prepared qubit.
MeasurementRecord simulate_record(const QubitParams& params, const SamplingPlan& plan,
                                  std::uint64_t seed);

/// Exact r_z at the plan's times (the N → ∞ limit of the record averages).
SampleSet exact_samples(const QubitParams& params, const SamplingPlan& plan);

/// Splits merged interleaved samples into the t_n series and the t_n + k
/// series. Throws PlanMismatch for sinc plans or mismatched times.
std::pair<SampleSet, SampleSet> split_series(const SampleSet& merged, const SamplingPlan& plan);
std::pair<MeasurementRecord, MeasurementRecord> split_series(const MeasurementRecord& merged,
                                                             const SamplingPlan& plan);

/// Minimum wall time to acquire the record: every measurement needs a fresh
/// preparation followed by evolution to its sample time, so
/// T = N Σ t_i. For sinc this is ½ N M (M + 1) Δt.
double min_total_time(const SamplingPlan& plan);

/// CSV with columns time,count,n,average.
void write_record_csv(std::ostream& out, const MeasurementRecord& record);
/// CSV with columns time,average.
void write_samples_csv(std::ostream& out, const SampleSet& samples);

}  // namespace qis
