#include "qis/sampling.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "format.hpp"
#include "qis/errors.hpp"
#include "qis/interleave_kernel.hpp"

namespace qis {

namespace {

void check_common(double f_lower, double bandwidth, std::size_t count, std::size_t repeats) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw InvalidBand("bandwidth must be positive, got " + std::to_string(bandwidth));
  }
  if (!(f_lower >= 0.0) || !std::isfinite(f_lower)) {
    throw InvalidBand("lower band edge must be non-negative, got " + std::to_string(f_lower));
  }
  if (count < 2) {
    throw InvalidPlan("sample count M must be at least 2");
  }
  if (repeats < 1 || repeats > 0xffffffffu) {
    throw InvalidPlan("measurements per point N must be in [1, 2^32)");
  }
}

bool same_time(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  return scheme == Scheme::Sinc ? "sinc" : "interleaved";
}

double SamplingPlan::total_sample_rate() const {
  return scheme_ == Scheme::Sinc ? 1.0 / interval_ : 2.0 / interval_;
}

SamplingPlan SamplingPlan::with_repeats(std::size_t repeats) const {
  if (repeats < 1 || repeats > 0xffffffffu) {
    throw InvalidPlan("measurements per point N must be in [1, 2^32)");
  }
  SamplingPlan copy = *this;
  copy.repeats_ = repeats;
  return copy;
}

SamplingPlan build_sinc_schedule(double f_lower, double bandwidth, std::size_t count,
                                 std::size_t repeats) {
  check_common(f_lower, bandwidth, count, repeats);
  SamplingPlan plan;
  plan.scheme_ = Scheme::Sinc;
  plan.f_lower_ = f_lower;
  plan.bandwidth_ = bandwidth;
  plan.interval_ = 1.0 / (2.0 * (f_lower + bandwidth));
  plan.repeats_ = repeats;
  plan.times_.reserve(count);
  for (std::size_t n = 1; n <= count; ++n) {
    plan.times_.push_back(static_cast<double>(n) * plan.interval_);
  }
  return plan;
}

SamplingPlan build_interleaved_schedule(double f_lower, double bandwidth, double offset,
                                        std::size_t count, std::size_t repeats) {
  check_common(f_lower, bandwidth, count, repeats);
  if (count % 2 != 0) {
    throw OddM("interleaved plans need an even sample count, got " + std::to_string(count));
  }
  make_kernel_params(f_lower, bandwidth, offset);

  SamplingPlan plan;
  plan.scheme_ = Scheme::Interleaved;
  plan.f_lower_ = f_lower;
  plan.bandwidth_ = bandwidth;
  plan.offset_ = offset;
  plan.interval_ = 1.0 / bandwidth;
  plan.repeats_ = repeats;
  plan.times_.reserve(count);
  for (std::size_t n = 1; n <= count / 2; ++n) {
    const double t = static_cast<double>(n) * plan.interval_;
    plan.times_.push_back(t);
    plan.times_.push_back(t + offset);
  }
  return plan;
}

MeasurementRecord::MeasurementRecord(std::vector<double> times,
                                     std::vector<std::uint32_t> counts, std::uint32_t n)
    : times_(std::move(times)), counts_(std::move(counts)), n_(n) {
  if (n_ == 0) {
    throw InvalidPlan("record needs at least one measurement per point");
  }
  if (times_.size() != counts_.size()) {
    throw InvalidPlan("record times and counts differ in length");
  }
  averages_.reserve(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] > n_) {
      throw InvalidPlan("record count exceeds measurements per point");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw InvalidPlan("record times must be strictly increasing");
    }
    averages_.push_back(2.0 * static_cast<double>(counts_[i]) / static_cast<double>(n_) - 1.0);
  }
}

std::mt19937_64 point_engine(std::uint64_t seed, std::uint64_t point_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(point_index),
                    static_cast<std::uint32_t>(point_index >> 32)};
  return std::mt19937_64(seq);
}

double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

MeasurementRecord simulate_record(const QubitParams& params, const SamplingPlan& plan,
                                  std::uint64_t seed) {
  const auto times = plan.times();
  std::vector<std::uint32_t> counts(times.size());
  const std::size_t n = plan.repeats();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double p = prob_plus(bloch_at(params, times[i]));
    auto engine = point_engine(seed, i);
    std::uint32_t plus = 0;
    for (std::size_t j = 0; j < n; ++j) {
      plus += unit_uniform(engine) < p ? 1u : 0u;
    }
    counts[i] = plus;
  }
  return MeasurementRecord({times.begin(), times.end()}, std::move(counts),
                           static_cast<std::uint32_t>(n));
}

SampleSet exact_samples(const QubitParams& params, const SamplingPlan& plan) {
  SampleSet out;
  out.times.assign(plan.times().begin(), plan.times().end());
  out.values.reserve(out.times.size());
  for (double t : out.times) {
    out.values.push_back(bloch_at(params, t).rz);
  }
  return out;
}

std::pair<SampleSet, SampleSet> split_series(const SampleSet& merged, const SamplingPlan& plan) {
  if (plan.scheme() != Scheme::Interleaved) {
    throw PlanMismatch("split_series needs an interleaved plan");
  }
  const auto times = plan.times();
  if (merged.times.size() != times.size() || merged.values.size() != times.size()) {
    throw PlanMismatch("sample count does not match the interleaved plan");
  }
  SampleSet a;
  SampleSet b;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!same_time(merged.times[i], times[i])) {
      throw PlanMismatch("sample time " + std::to_string(merged.times[i]) +
                         " does not match plan time " + std::to_string(times[i]));
    }
    SampleSet& dst = (i % 2 == 0) ? a : b;
    dst.times.push_back(merged.times[i]);
    dst.values.push_back(merged.values[i]);
  }
  return {std::move(a), std::move(b)};
}

std::pair<MeasurementRecord, MeasurementRecord> split_series(const MeasurementRecord& merged,
                                                             const SamplingPlan& plan) {
  // Validates times.
  split_series(merged.samples(), plan);
  std::vector<double> ta, tb;
  std::vector<std::uint32_t> ca, cb;
  for (std::size_t i = 0; i < merged.times().size(); ++i) {
    auto& t = (i % 2 == 0) ? ta : tb;
    auto& c = (i % 2 == 0) ? ca : cb;
    t.push_back(merged.times()[i]);
    c.push_back(merged.counts()[i]);
  }
  return {MeasurementRecord(std::move(ta), std::move(ca), merged.n()),
          MeasurementRecord(std::move(tb), std::move(cb), merged.n())};
}

double min_total_time(const SamplingPlan& plan) {
  double sum = 0.0;
  for (double t : plan.times()) {
    sum += t;
  }
  return static_cast<double>(plan.repeats()) * sum;
}

void write_record_csv(std::ostream& out, const MeasurementRecord& record) {
  out << "time,count,n,average\n";
  for (std::size_t i = 0; i < record.times().size(); ++i) {
    out << detail::fmt_double(record.times()[i]) << ',' << record.counts()[i] << ','
        << record.n() << ',' << detail::fmt_double(record.averages()[i]) << '\n';
  }
}

void write_samples_csv(std::ostream& out, const SampleSet& samples) {
  out << "time,average\n";
  for (std::size_t i = 0; i < samples.times.size(); ++i) {
    out << detail::fmt_double(samples.times[i]) << ',' << detail::fmt_double(samples.values[i])
        << '\n';
  }
}

}  // namespace qis
