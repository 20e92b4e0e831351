#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace qis {

/// sin(πx)/(πx) with sinc(0) = 1.
double normalized_sinc(double x);

/// Smallest integer strictly greater than 2 f_lower / bandwidth.
int interleave_order(double f_lower, double bandwidth);

/// Second-order (two interleaved series) interpolation kernel for the band
/// [f_lower, f_lower + bandwidth], series spacing 1/bandwidth and intra-pair
/// offset k. Only constructible through make_kernel_params, which enforces
/// that the kernel is finite.
class InterleaveKernelParams {
 public:
  /// One of the two kernel terms:
  ///   [cos(a t − phase) − cos(b t − phase)] / (scale · t)
  /// with scale = 2πB sin(phase).
  struct Term {
    double a = 0.0;
    double b = 0.0;
    double phase = 0.0;
    double scale = 0.0;
  };

  double f_lower() const { return f_lower_; }
  double bandwidth() const { return bandwidth_; }
  double offset() const { return offset_; }
  double interval() const { return 1.0 / bandwidth_; }
  int order() const { return order_; }

  /// False when the upper term's two cosines coincide (2 f_L = (r − 1) B);
  /// the term is then identically zero and drops out.
  bool upper_term_active() const { return term_count_ == 2; }
  std::span<const Term> terms() const { return {terms_.data(), term_count_}; }

 private:
  friend InterleaveKernelParams make_kernel_params(double, double, double);

  double f_lower_ = 0.0;
  double bandwidth_ = 1.0;
  double offset_ = 0.5;
  int order_ = 1;
  std::array<Term, 2> terms_{};
  std::size_t term_count_ = 0;
};

/// Throws InvalidBand for B <= 0 or f_L < 0, InvalidPlan unless 0 < k < 1/B,
/// KernelSingular if an active term has |sin(phase)| <= 1e-6.
InterleaveKernelParams make_kernel_params(double f_lower, double bandwidth, double offset);

/// S(t) = S0(t) + S1(t); S(0) = 1, S(n/B) = S(n/B + k) = 0 for n != 0.
double kernel_S(double t, const InterleaveKernelParams& params);

/// k = 1/(2B) when the kernel is well conditioned there, otherwise the
/// quadrature offset 1/(4 f_c) with f_c the band centre.
double default_interleave_offset(double f_lower, double bandwidth);

/// max |S(t) − S(−t)| over `points` uniformly spaced t in (0, periods / B].
double kernel_asymmetry(const InterleaveKernelParams& params, double periods = 2.0,
                        std::size_t points = 2000);

}  // namespace qis
