#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qis/dynamics.hpp"
#include "qis/resonance.hpp"
#include "qis/sampling.hpp"

namespace qis::harness {

/// Plan descriptor as written in a config file; k defaults to
/// default_interleave_offset().
struct PlanSpec {
  Scheme scheme = Scheme::Sinc;
  double f_lower = 0.0;
  double bandwidth = 1.0;
  std::optional<double> offset;
  std::size_t count = 2;
  std::size_t repeats = 1;

  SamplingPlan build() const;
  PlanSpec with_count(std::size_t m) const;
  PlanSpec with_repeats(std::size_t n) const;
};

struct PipelineOptions {
  std::size_t oversample = 16;
  std::size_t zero_pad = 4;
  /// Fit band; the plan's [f_L, f_L + B] when unset.
  std::optional<std::pair<double, double>> band;
  SearchGrid grid;
  /// Use exact r_z instead of simulated record averages.
  bool noiseless = false;
};

enum class SweepAxis { N, M };

struct SweepSpec {
  SweepAxis axis = SweepAxis::N;
  std::vector<std::size_t> values;
};

struct ExperimentConfig {
  QubitParams qubit;
  std::vector<PlanSpec> plans;
  std::size_t reps = 20;
  std::uint64_t base_seed = 1;
  std::filesystem::path output_dir = "out";
  PipelineOptions pipeline;
  std::optional<SweepSpec> sweep;
  bool require_equal_windows = true;

  const PlanSpec* find_plan(Scheme scheme) const;
};

/// Parses the flat key = value format with [section] headers. Errors are
/// ConfigError with "<source>:<line>: [section] key: reason".
ExperimentConfig parse_config(std::istream& in, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Seed of trial j.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
  return base_seed + trial;
}

}  // namespace qis::harness
