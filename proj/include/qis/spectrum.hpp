#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "qis/reconstruction.hpp"

namespace qis {

/// One-sided amplitude spectrum on the uniform grid freqs[j] = j * resolution.
struct Spectrum {
  std::vector<double> freqs;
  std::vector<double> amps;
  double resolution = 0.0;
  /// Number of rendered signal points (the normalisation of amps).
  std::size_t signal_points = 0;
  /// DFT length after zero padding.
  std::size_t transform_length = 0;

  /// Half-open index range [first, last) of bins with lo <= f <= hi.
  std::pair<std::size_t, std::size_t> band_range(double lo, double hi) const;
};

/// |DFT| / n of the signal rendered with step Δt / oversample over its
/// window, rectangular window, zero-padded to zero_pad * n points.
Spectrum amplitude_spectrum(const ReconstructedSignal& signal, std::size_t oversample = 16,
                            std::size_t zero_pad = 4);
Spectrum amplitude_spectrum(const DenseRendering& rendering, std::size_t zero_pad = 4);

/// Sub-bin peak frequency from a parabola through the log amplitudes of the
/// largest in-band bin and its two neighbours. Throws PeakAtEdge when the
/// largest bin is the first or last bin of [lo, hi].
double refine_peak(const Spectrum& spectrum, double lo, double hi);
double refine_peak(const Spectrum& spectrum);

/// CSV with columns freq,amp.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

}  // namespace qis
