#include "qis/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "format.hpp"
#include "qis/errors.hpp"
#include "qis/parallel.hpp"
#include "qis/simd/kernels.hpp"
#include "simd/model_terms.hpp"

namespace qis {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Candidate {
  double residual = std::numeric_limits<double>::infinity();
  double kappa = 0.0;
  double f = 0.0;
  double amp = 0.0;

  bool operator<(const Candidate& o) const {
    return std::tie(residual, kappa, f, amp) < std::tie(o.residual, o.kappa, o.f, o.amp);
  }
};

std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (count == 0 || !(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("log-spaced axis needs 0 < lo <= hi and a positive count");
  }
  if (count == 1) {
    return {lo};
  }
  std::vector<double> v(count);
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  v.back() = hi;
  return v;
}

double unit_model_sq(double w, double omega0, double kappa, ResonanceShape shape) {
  if (shape == ResonanceShape::DampedOscillation) {
    const double k4 = 4.0 * kappa;
    return simd::detail::damped_model_sq(w, omega0 * omega0, k4, k4 * k4);
  }
  const double k2 = 2.0 * kappa;
  return simd::detail::lorentz_model_sq(w, omega0, k2 * k2);
}

std::string_view shape_name(ResonanceShape shape) {
  return shape == ResonanceShape::DampedOscillation ? "damped-oscillation" : "lorentzian";
}

}  // namespace

double resonance_model(double freq, double f0, double kappa, double amp, ResonanceShape shape) {
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("resonance_model needs kappa > 0");
  }
  return amp * std::sqrt(unit_model_sq(kTwoPi * freq, kTwoPi * f0, kappa, shape));
}

std::string SearchGrid::describe() const {
  std::ostringstream os;
  if (!f_values.empty()) {
    os << "f: " << f_values.size() << " explicit values";
  } else {
    os << "f: band lattice through refined peak, step "
       << (f_step > 0.0 ? detail::fmt_double(f_step) : std::string("resolution/4"));
  }
  if (!kappa_values.empty()) {
    os << "; kappa: " << kappa_values.size() << " explicit values";
  } else {
    os << "; kappa: log [" << detail::fmt_double(kappa_min) << ", "
       << detail::fmt_double(kappa_max) << "] x" << kappa_count;
  }
  if (!amp_values.empty()) {
    os << "; amp: " << amp_values.size() << " explicit values";
  } else {
    os << "; amp: log [" << detail::fmt_double(amp_min) << ", " << detail::fmt_double(amp_max)
       << "] x" << amp_count << " of peak";
  }
  os << "; shape: " << shape_name(shape);
  return os.str();
}

double fit_residual(const Spectrum& spectrum, double band_lo, double band_hi, double f0,
                    double kappa, double amp, ResonanceShape shape) {
  const auto [first, last] = spectrum.band_range(band_lo, band_hi);
  double sum = 0.0;
  for (std::size_t j = first; j < last; ++j) {
    const double e = spectrum.amps[j] - resonance_model(spectrum.freqs[j], f0, kappa, amp, shape);
    sum += e * e;
  }
  return sum;
}

ResonanceFit fit_resonance(const Spectrum& spectrum, double band_lo, double band_hi,
                           const SearchGrid& grid) {
  if (!(band_hi > band_lo)) {
    throw std::invalid_argument("fit band must have band_hi > band_lo");
  }
  if (spectrum.freqs.empty() || band_lo < spectrum.freqs.front() ||
      band_hi > spectrum.freqs.back()) {
    throw std::invalid_argument("fit band outside the spectrum's frequency range");
  }
  const auto [first, last] = spectrum.band_range(band_lo, band_hi);
  const std::size_t bins = last - first;
  if (bins < 3) {
    throw EmptyWindow("fit band holds fewer than three spectrum bins");
  }
  const std::span<const double> data(spectrum.amps.data() + first, bins);
  std::vector<double> omegas(bins);
  for (std::size_t j = 0; j < bins; ++j) {
    omegas[j] = kTwoPi * spectrum.freqs[first + j];
  }

  std::vector<double> sorted(data.begin(), data.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(bins / 2),
                   sorted.end());
  const double median = sorted[bins / 2];
  const double peak = *std::max_element(data.begin(), data.end());
  const double ratio = median > 0.0 ? peak / median : std::numeric_limits<double>::infinity();
  if (!(peak > 3.0 * median)) {
    throw NoPeakInBand("no resonance in [" + std::to_string(band_lo) + ", " +
                       std::to_string(band_hi) + "]: in-band max/median = " +
                       std::to_string(ratio) + " (needs > 3)");
  }

  double centre = 0.0;
  try {
    centre = refine_peak(spectrum, band_lo, band_hi);
  } catch (const PeakAtEdge&) {
    centre = spectrum.freqs[first + static_cast<std::size_t>(
                                        std::max_element(data.begin(), data.end()) - data.begin())];
  }

  std::vector<double> fs = grid.f_values;
  if (fs.empty()) {
    const double step = grid.f_step > 0.0 ? grid.f_step : spectrum.resolution / 4.0;
    const auto lo_j = static_cast<long long>(std::ceil((band_lo - centre) / step));
    const auto hi_j = static_cast<long long>(std::floor((band_hi - centre) / step));
    for (long long j = lo_j; j <= hi_j; ++j) {
      fs.push_back(centre + static_cast<double>(j) * step);
    }
  }
  const std::vector<double> ks = grid.kappa_values.empty()
                                     ? log_space(grid.kappa_min, grid.kappa_max, grid.kappa_count)
                                     : grid.kappa_values;
  const bool absolute_amps = !grid.amp_values.empty();
  const std::vector<double> amp_axis =
      absolute_amps ? grid.amp_values : log_space(grid.amp_min, grid.amp_max, grid.amp_count);
  for (double k : ks) {
    if (!(k > 0.0)) {
      throw std::invalid_argument("kappa grid values must be positive");
    }
  }

  double data_sq = 0.0;
  for (double d : data) {
    data_sq += d * d;
  }

  std::vector<Candidate> best_per_f(fs.size());
  parallel_for(fs.size(), [&](std::size_t fi) {
    const double f0 = fs[fi];
    const double omega0 = kTwoPi * f0;
    Candidate best;
    for (double kappa : ks) {
      const auto m = simd::resonance_moments(omegas, data, omega0, kappa, grid.shape);
      const double scale =
          absolute_amps ? 1.0 : peak / std::sqrt(unit_model_sq(omega0, omega0, kappa, grid.shape));
      for (double a : amp_axis) {
        const double amp = scale * a;
        const double residual = data_sq - 2.0 * amp * m.model_dot_data + amp * amp * m.model_sq;
        const Candidate c{residual, kappa, f0, amp};
        if (c < best) {
          best = c;
        }
      }
    }
    best_per_f[fi] = best;
  });
  if (best_per_f.empty()) {
    throw EmptyWindow("frequency grid is empty");
  }
  const Candidate best = *std::min_element(best_per_f.begin(), best_per_f.end());

  ResonanceFit fit;
  fit.f_hat = best.f;
  fit.kappa_hat = best.kappa;
  fit.amp_hat = best.amp;
  fit.tau_hat = 1.0 / best.kappa;
  fit.residual = fit_residual(spectrum, band_lo, band_hi, best.f, best.kappa, best.amp, grid.shape);
  fit.band_lo = band_lo;
  fit.band_hi = band_hi;
  fit.peak_frequency = centre;
  fit.peak_ratio = ratio;
  fit.bins = bins;
  fit.f_points = fs.size();
  fit.kappa_points = ks.size();
  fit.amp_points = amp_axis.size();
  fit.shape = grid.shape;
  return fit;
}

void write_fit_summary(std::ostream& out, const ResonanceFit& fit, const SearchGrid& grid) {
  using detail::fmt_double;
  out << "f_hat = " << fmt_double(fit.f_hat) << '\n'
      << "kappa_hat = " << fmt_double(fit.kappa_hat) << '\n'
      << "tau_hat = " << fmt_double(fit.tau_hat) << '\n'
      << "amp_hat = " << fmt_double(fit.amp_hat) << '\n'
      << "residual = " << fmt_double(fit.residual) << '\n'
      << "band = " << fmt_double(fit.band_lo) << ", " << fmt_double(fit.band_hi) << '\n'
      << "peak_frequency = " << fmt_double(fit.peak_frequency) << '\n'
      << "peak_ratio = " << fmt_double(fit.peak_ratio) << '\n'
      << "bins = " << fit.bins << '\n'
      << "grid_points = " << fit.f_points << " x " << fit.kappa_points << " x " << fit.amp_points
      << '\n'
      << "grid = " << grid.describe() << '\n';
}

void write_fit_model_csv(std::ostream& out, const Spectrum& spectrum, const ResonanceFit& fit) {
  out << "freq,amp\n";
  const auto [first, last] = spectrum.band_range(fit.band_lo, fit.band_hi);
  for (std::size_t j = first; j < last; ++j) {
    const double f = spectrum.freqs[j];
    out << detail::fmt_double(f) << ','
        << detail::fmt_double(resonance_model(f, fit.f_hat, fit.kappa_hat, fit.amp_hat, fit.shape))
        << '\n';
  }
}

}  // namespace qis
