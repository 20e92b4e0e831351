#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qis/errors.hpp"
#include "qis/interleave_kernel.hpp"

using namespace qis;

namespace {

constexpr double pi = std::numbers::pi;

// Straight transcription of the two-term kernel, written independently of
// the library for cross-checking away from t = 0.
double reference_S(double t, double fl, double B, double k) {
  const int r = static_cast<int>(std::floor(2 * fl / B)) + 1;
  auto term = [&](double a, double b, double phi) {
    return (std::cos(a * t - phi) - std::cos(b * t - phi)) / (2 * pi * B * std::sin(phi) * t);
  };
  double s = term(2 * pi * (r * B - fl), 2 * pi * fl, r * pi * B * k);
  const double a1 = 2 * pi * (fl + B);
  const double b1 = 2 * pi * (r * B - fl);
  if (std::abs(a1 - b1) > 1e-9) {
    s += term(a1, b1, (r + 1) * pi * B * k);
  }
  return s;
}

}  // namespace

TEST_CASE("interleave order is strictly above 2 f_L / B") {
  CHECK(interleave_order(0.8, 0.4) == 5);
  CHECK(interleave_order(0.8, 0.4003) == 4);
  CHECK(interleave_order(0.0, 1.0) == 1);
  CHECK(interleave_order(1.0, 0.3) == 7);
  CHECK_THROWS_AS(interleave_order(0.8, 0.0), InvalidBand);
}

TEST_CASE("normalized sinc") {
  CHECK(normalized_sinc(0.0) == 1.0);
  CHECK(std::abs(normalized_sinc(3.0)) < 1e-15);
  CHECK(normalized_sinc(0.5) == doctest::Approx(2.0 / pi).epsilon(1e-15));
}

TEST_CASE("kernel is one at the origin") {
  for (auto [fl, B] : {std::pair{0.8, 0.4003}, {0.8, 0.4}, {0.0, 1.0}, {1.7, 0.5}}) {
    const auto p = make_kernel_params(fl, B, default_interleave_offset(fl, B));
    CHECK(kernel_S(0.0, p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kernel_S(1e-9, p) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(kernel_S(-3e-8, p) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("kernel vanishes on both lattices") {
  for (auto [fl, B] : {std::pair{0.8, 0.4003}, {0.8, 0.4}, {0.0, 1.0}, {0.3, 0.2}, {1.7, 0.5}}) {
    const double k = default_interleave_offset(fl, B);
    const auto p = make_kernel_params(fl, B, k);
    const double dt = 1.0 / B;
    for (int n = -25; n <= 25; ++n) {
      if (n != 0) {
        CHECK(std::abs(kernel_S(n * dt, p)) < 1e-9);
      }
      CHECK(std::abs(kernel_S(n * dt + k, p)) < 1e-9);
    }
  }
}

TEST_CASE("kernel matches an independent transcription") {
  for (auto [fl, B] : {std::pair{0.8, 0.4003}, {0.8, 0.4}, {0.3, 0.2}, {1.7, 0.5}}) {
    const double k = default_interleave_offset(fl, B);
    const auto p = make_kernel_params(fl, B, k);
    for (int i = 1; i < 400; ++i) {
      const double t = -30.0 + 0.15037 * i;
      CHECK(kernel_S(t, p) == doctest::Approx(reference_S(t, fl, B, k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("baseband case reduces to sinc") {
  const double B = 1.0;
  const auto p = make_kernel_params(0.0, B, 0.5 / B);
  CHECK(p.order() == 1);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double t = -25.0 + 50.0 * i / 9999.0;
    worst = std::max(worst, std::abs(kernel_S(t, p) - normalized_sinc(2 * B * t)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("baseband kernel has no zeros besides the lattices near the origin") {
  const auto p = make_kernel_params(0.0, 1.0, 0.5);
  int crossings = 0;
  double prev = kernel_S(-0.999, p);
  for (int i = 1; i <= 100000; ++i) {
    const double t = -0.999 + 1.998 * i / 100000.0;
    const double v = kernel_S(t, p);
    if ((v > 0) != (prev > 0)) {
      ++crossings;
      CHECK(std::abs(std::abs(t) - 0.5) < 1e-4);
    }
    prev = v;
  }
  CHECK(crossings == 2);
}

TEST_CASE("upper term drops out on integer band positioning") {
  // 2 f_L = (r - 1) B with r = 5.
  const auto p = make_kernel_params(0.8, 0.4, 1.25);
  CHECK_FALSE(p.upper_term_active());
  CHECK(p.terms().size() == 1);
  const auto q = make_kernel_params(0.8, 0.4003, 0.25);
  CHECK(q.upper_term_active());
}

TEST_CASE("kernel construction errors") {
  CHECK_THROWS_AS(make_kernel_params(0.8, -1.0, 0.5), InvalidBand);
  CHECK_THROWS_AS(make_kernel_params(-0.1, 0.4, 0.5), InvalidBand);
  CHECK_THROWS_AS(make_kernel_params(0.8, 0.4, 0.0), InvalidPlan);
  CHECK_THROWS_AS(make_kernel_params(0.8, 0.4, 2.5), InvalidPlan);
  // r = 5, sin(5 pi B k) = 0 at k = 1 / (5 B) = 0.5.
  CHECK_THROWS_AS(make_kernel_params(0.8, 0.4, 0.5), KernelSingular);
}

TEST_CASE("default offset") {
  CHECK(default_interleave_offset(0.0, 1.0) == 0.5);
  CHECK(default_interleave_offset(0.8, 0.4) == 1.25);
  // r = 4 makes half the interval singular, so the quadrature offset is used.
  CHECK(default_interleave_offset(0.8, 0.4003) == doctest::Approx(1.0 / (4 * 1.00015)));
  CHECK_NOTHROW(make_kernel_params(0.8, 0.4003, default_interleave_offset(0.8, 0.4003)));
}

TEST_CASE("evenness is reported") {
  CHECK(kernel_asymmetry(make_kernel_params(0.0, 1.0, 0.5)) < 1e-12);
  CHECK(kernel_asymmetry(make_kernel_params(0.8, 0.4003, 0.25)) > 1e-4);
}
