#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qis/harness/config.hpp"
#include "qis/reconstruction.hpp"
#include "qis/resonance.hpp"
#include "qis/sampling.hpp"
#include "qis/spectrum.hpp"

namespace qis::harness {

/// Samples fed to reconstruction; `record` is empty in noiseless mode.
struct Acquisition {
  SampleSet samples;
  std::optional<MeasurementRecord> record;
};

Acquisition acquire(const QubitParams& params, const SamplingPlan& plan, std::uint64_t seed,
                    bool noiseless);

std::pair<double, double> fit_band(const PipelineOptions& options, const SamplingPlan& plan);

struct SpectralEstimate {
  Acquisition data;
  Spectrum spectrum;
  ResonanceFit fit;
};

/// acquire -> reconstruct -> amplitude spectrum -> resonance fit.
SpectralEstimate estimate_once(const QubitParams& params, const SamplingPlan& plan,
                               std::uint64_t seed, const PipelineOptions& options);

/// RMS of (reconstruction − r_z) over grid points in the middle half of the
/// rendering's span.
double central_rms(const DenseRendering& rendering, const QubitParams& params);

struct SchemeReconstruction {
  PlanSpec spec;
  SamplingPlan plan;
  std::vector<double> rms;
  /// max |S(t) − S(−t)|; interleaved plans only.
  double kernel_asymmetry = 0.0;
};

struct ReconstructionReport {
  std::vector<SchemeReconstruction> schemes;
  /// Interleaved sample count over sinc sample count.
  double sample_ratio = 0.0;
  std::vector<std::string> files;
};

/// Needs both schemes. Writes per scheme and repetition the sample points and
/// the dense reconstruction, one analytic reference per scheme, and
/// reconstruct_summary.json.
ReconstructionReport run_reconstruction(const ExperimentConfig& config);

struct TimingRow {
  Scheme scheme = Scheme::Sinc;
  std::size_t count = 0;
  std::size_t repeats = 0;
  double interval = 0.0;
  double offset = 0.0;
  double window_end = 0.0;
  double sample_rate = 0.0;
  double total_time = 0.0;
};

/// Ratios for plans first < second: count_ratio and rate_ratio are
/// second / first, time_saving is first / second.
struct TimingPair {
  std::size_t first = 0;
  std::size_t second = 0;
  double count_ratio = 0.0;
  double rate_ratio = 0.0;
  double time_saving = 0.0;
};

struct TimingReport {
  std::vector<TimingRow> rows;
  std::vector<TimingPair> pairs;
};

/// Throws WindowMismatch when require_equal_windows is set and two plans'
/// last sample times differ by more than 1%.
TimingReport report_timing(std::span<const SamplingPlan> plans, bool require_equal_windows = true);

/// Sinc plan over the same band whose last sample lands closest to the end
/// of `plan`'s window, with the same N.
SamplingPlan equivalent_sinc_plan(const SamplingPlan& plan);

struct SpectrumReport {
  SamplingPlan plan;
  SpectralEstimate estimate;
  TimingReport timing;
  std::vector<std::string> files;
};

/// Uses the interleaved plan and the trial-0 seed. NoPeakInBand propagates.
SpectrumReport run_spectrum(const ExperimentConfig& config);

struct SweepRow {
  std::size_t axis_value = 0;
  Scheme scheme = Scheme::Sinc;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double mean_tau = 0.0;
  double std_tau = 0.0;
  double mean_f = 0.0;
  double min_total_time = 0.0;
  std::string status;
  std::vector<double> tau_values;
  std::vector<double> f_values;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::N;
  std::vector<SweepRow> rows;
};

/// R seeded trials per (axis value, plan), run concurrently. Failed trials
/// are counted in the row's status; means cover the successful ones.
SweepTable sweep_estimates(const ExperimentConfig& config, std::size_t max_threads = 0);

/// sweep_estimates plus sweep.csv and sweep_summary.json.
SweepTable run_sweep(const ExperimentConfig& config, std::vector<std::string>* files = nullptr);

/// report_timing over the config's plans plus timing.csv and
/// timing_summary.json. A lone interleaved plan is compared against
/// equivalent_sinc_plan().
TimingReport run_timing(const ExperimentConfig& config, std::vector<std::string>* files = nullptr);

}  // namespace qis::harness
