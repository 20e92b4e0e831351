#include "qis/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <ostream>
#include <string>

#include "format.hpp"
#include "qis/errors.hpp"

namespace qis {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::complex<double>> real_dft(std::vector<double>& input) {
  const std::size_t n = input.size();
  std::vector<std::complex<double>> output(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), input.data(),
                                reinterpret_cast<fftw_complex*>(output.data()),
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return output;
}

double safe_log(double v) { return std::log(std::max(v, 1e-300)); }

}  // namespace

std::pair<std::size_t, std::size_t> Spectrum::band_range(double lo, double hi) const {
  const auto first = std::lower_bound(freqs.begin(), freqs.end(), lo) - freqs.begin();
  const auto last = std::upper_bound(freqs.begin(), freqs.end(), hi) - freqs.begin();
  return {static_cast<std::size_t>(first), static_cast<std::size_t>(std::max(first, last))};
}

Spectrum amplitude_spectrum(const DenseRendering& rendering, std::size_t zero_pad) {
  if (zero_pad < 1) {
    throw std::invalid_argument("zero_pad must be at least 1");
  }
  const std::size_t n = rendering.values.size();
  if (n < 2 || !(rendering.step > 0.0)) {
    throw EmptyWindow("spectrum needs at least two rendered points");
  }
  const std::size_t len = n * zero_pad;
  std::vector<double> padded(len, 0.0);
  std::copy(rendering.values.begin(), rendering.values.end(), padded.begin());
  const auto dft = real_dft(padded);

  Spectrum s;
  s.signal_points = n;
  s.transform_length = len;
  s.resolution = 1.0 / (static_cast<double>(len) * rendering.step);
  s.freqs.resize(dft.size());
  s.amps.resize(dft.size());
  for (std::size_t j = 0; j < dft.size(); ++j) {
    s.freqs[j] = static_cast<double>(j) * s.resolution;
    s.amps[j] = std::abs(dft[j]) / static_cast<double>(n);
  }
  return s;
}

Spectrum amplitude_spectrum(const ReconstructedSignal& signal, std::size_t oversample,
                            std::size_t zero_pad) {
  if (oversample < 4) {
    throw std::invalid_argument("oversample must be at least 4");
  }
  if (!(signal.window_end() > signal.window_start())) {
    throw EmptyWindow("reconstruction window is empty");
  }
  const double step = signal.plan().interval() / static_cast<double>(oversample);
  return amplitude_spectrum(signal.render_uniform(step), zero_pad);
}

double refine_peak(const Spectrum& spectrum, double lo, double hi) {
  const auto [first, last] = spectrum.band_range(lo, hi);
  if (last <= first) {
    throw EmptyWindow("no spectrum bins in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "]");
  }
  const auto peak = static_cast<std::size_t>(
      std::max_element(spectrum.amps.begin() + static_cast<std::ptrdiff_t>(first),
                       spectrum.amps.begin() + static_cast<std::ptrdiff_t>(last)) -
      spectrum.amps.begin());
  if (peak == first || peak + 1 == last) {
    throw PeakAtEdge("spectral peak at band edge, f = " + std::to_string(spectrum.freqs[peak]));
  }
  const double left = safe_log(spectrum.amps[peak - 1]);
  const double centre = safe_log(spectrum.amps[peak]);
  const double right = safe_log(spectrum.amps[peak + 1]);
  const double curvature = left - 2.0 * centre + right;
  double shift = 0.0;
  if (curvature < 0.0) {
    shift = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
  }
  return spectrum.freqs[peak] + shift * spectrum.resolution;
}

double refine_peak(const Spectrum& spectrum) {
  return refine_peak(spectrum, spectrum.freqs.front(), spectrum.freqs.back());
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "freq,amp\n";
  for (std::size_t j = 0; j < spectrum.freqs.size(); ++j) {
    out << detail::fmt_double(spectrum.freqs[j]) << ',' << detail::fmt_double(spectrum.amps[j])
        << '\n';
  }
}

}  // namespace qis
