#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qis/resonance_shape.hpp"
#include "qis/spectrum.hpp"

namespace qis {

/// Spectral line shape of a damped oscillation with centre f0:
///   amp |iΩ + 4κ| / |(iΩ + 2κ)² + μ²|,  Ω = 2π freq, μ² = (2πf0)² − 4κ².
/// Throws std::invalid_argument unless kappa > 0.
double resonance_model(double freq, double f0, double kappa, double amp,
                       ResonanceShape shape = ResonanceShape::DampedOscillation);

/// Parameter grid for the enumerative fit. Frequencies step by f_step
/// (default a quarter bin) on a lattice through the refined spectral peak,
/// covering the fit band; kappa is log-spaced; amplitudes are log-spaced
/// multiples of the amplitude that puts the model's peak at the observed
/// in-band maximum. Non-empty explicit lists replace the generated axes
/// (explicit amplitudes are absolute).
struct SearchGrid {
  double f_step = 0.0;
  double kappa_min = 1e-3;
  double kappa_max = 0.5;
  std::size_t kappa_count = 200;
  double amp_min = 0.1;
  double amp_max = 10.0;
  std::size_t amp_count = 50;
  ResonanceShape shape = ResonanceShape::DampedOscillation;

  std::vector<double> f_values;
  std::vector<double> kappa_values;
  std::vector<double> amp_values;

  std::string describe() const;
};

struct ResonanceFit {
  double f_hat = 0.0;
  double kappa_hat = 0.0;
  double amp_hat = 0.0;
  double tau_hat = 0.0;
  /// Σ (amp_j − model_j)² over the in-band bins.
  double residual = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  /// Refined peak the frequency lattice is centred on.
  double peak_frequency = 0.0;
  /// In-band max / median amplitude.
  double peak_ratio = 0.0;
  std::size_t bins = 0;
  std::size_t f_points = 0;
  std::size_t kappa_points = 0;
  std::size_t amp_points = 0;
  ResonanceShape shape = ResonanceShape::DampedOscillation;
};

/// Exhaustive least-squares search over the grid. The winner is the
/// smallest (residual, kappa, f, amp) in lexicographic order. Throws
/// NoPeakInBand if the in-band maximum is at most 3× the in-band median.
ResonanceFit fit_resonance(const Spectrum& spectrum, double band_lo, double band_hi,
                           const SearchGrid& grid = {});

/// Σ (amp_j − model_j)² over the bins of [band_lo, band_hi].
double fit_residual(const Spectrum& spectrum, double band_lo, double band_hi, double f0,
                    double kappa, double amp,
                    ResonanceShape shape = ResonanceShape::DampedOscillation);

/// Flat key = value block.
void write_fit_summary(std::ostream& out, const ResonanceFit& fit, const SearchGrid& grid);

/// CSV (freq,amp) of the fitted model over the fit band's bins.
void write_fit_model_csv(std::ostream& out, const Spectrum& spectrum, const ResonanceFit& fit);

}  // namespace qis
