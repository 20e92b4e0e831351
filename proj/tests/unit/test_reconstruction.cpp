#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "qis/errors.hpp"
#include "qis/interleave_kernel.hpp"
#include "qis/reconstruction.hpp"

using namespace qis;

namespace {

constexpr double pi = std::numbers::pi;

SampleSet sample_fn(const SamplingPlan& plan, const std::function<double(double)>& fn) {
  SampleSet s;
  for (double t : plan.times()) {
    s.times.push_back(t);
    s.values.push_back(fn(t));
  }
  return s;
}

double central_rms(const ReconstructedSignal& sig, const std::function<double(double)>& truth) {
  const double lo = sig.window_start();
  const double span = sig.window_end() - lo;
  double ss = 0.0;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + span * (0.25 + 0.5 * i / n);
    const double d = sig(t) - truth(t);
    ss += d * d;
  }
  return std::sqrt(ss / (n + 1));
}

}  // namespace

TEST_CASE("interpolation property") {
  const QubitParams p{1.0, 0.1};
  const auto sinc_plan = build_sinc_schedule(0.8, 0.4003, 42, 100);
  const auto il_plan =
      build_interleaved_schedule(0.8, 0.4003, default_interleave_offset(0.8, 0.4003), 18, 100);
  for (const auto& plan : {sinc_plan, il_plan}) {
    const auto rec = simulate_record(p, plan, 11);
    const auto sig = reconstruct(rec.samples(), plan);
    const auto rendered = sig.render(rec.times());
    for (std::size_t i = 0; i < rec.times().size(); ++i) {
      CHECK(std::abs(sig(rec.times()[i]) - rec.averages()[i]) < 1e-9);
      CHECK(std::abs(rendered[i] - rec.averages()[i]) < 1e-9);
    }
  }
}

TEST_CASE("record and sample-set entry points agree") {
  const QubitParams p{1.0, 0.05};
  const auto plan = build_interleaved_schedule(0.8, 0.4, 1.25, 40, 50);
  const auto rec = simulate_record(p, plan, 2);
  const auto [a, b] = split_series(rec, plan);
  const auto from_rec = interleaved_reconstruct(a, b, plan);
  const auto from_set = reconstruct(rec.samples(), plan);
  for (double t = 2.5; t < 50.0; t += 0.713) {
    CHECK(from_rec(t) == from_set(t));
  }
  const auto splan = build_sinc_schedule(0.8, 0.4, 40, 50);
  const auto srec = simulate_record(p, splan, 2);
  CHECK(sinc_reconstruct(srec, splan)(7.3) == sinc_reconstruct(srec.samples(), splan)(7.3));
}

TEST_CASE("sinc reconstruction of a baseband tone") {
  const auto plan = build_sinc_schedule(0.0, 1.0, 200, 1);
  CHECK(plan.interval() == 0.5);
  auto tone = [](double t) { return std::cos(2 * pi * 0.3 * t); };
  const auto sig = sinc_reconstruct(sample_fn(plan, tone), plan);
  CHECK(central_rms(sig, tone) < 1e-2);
}

TEST_CASE("interleaved reconstruction of an in-band tone") {
  const double k = default_interleave_offset(0.8, 0.4003);
  const auto plan = build_interleaved_schedule(0.8, 0.4003, k, 200, 1);
  auto tone = [](double t) { return std::cos(2 * pi * t); };
  const auto sig = reconstruct(sample_fn(plan, tone), plan);
  CHECK(central_rms(sig, tone) < 1e-2);
}

TEST_CASE("noiseless reconstructions of the decaying signal") {
  const QubitParams p{1.0, 0.1};
  auto rz = [&](double t) { return bloch_at(p, t).rz; };
  const auto sinc_plan = build_sinc_schedule(0.8, 0.4003, 42, 100);
  CHECK(central_rms(sinc_reconstruct(exact_samples(p, sinc_plan), sinc_plan), rz) < 0.05);
  const auto il_plan =
      build_interleaved_schedule(0.8, 0.4003, default_interleave_offset(0.8, 0.4003), 18, 100);
  CHECK(central_rms(reconstruct(exact_samples(p, il_plan), il_plan), rz) < 0.1);
}

TEST_CASE("baseband interleaving reduces to sinc") {
  // Two series at spacing 1/B offset by half of it form one uniform series
  // at the Nyquist spacing 1/(2B).
  const double B = 0.5;
  const auto plan = build_interleaved_schedule(0.0, B, 1.0 / (2 * B), 60, 1);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const SampleSet data = sample_fn(plan, [&](double) { return u(rng); });
  const auto sig = reconstruct(data, plan);
  const double nyquist_dt = 1.0 / (2 * B);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double t = 2.0 + 60.0 * i / 9999.0;
    double direct = 0.0;
    for (std::size_t n = 0; n < data.times.size(); ++n) {
      direct += data.values[n] * normalized_sinc((t - data.times[n]) / nyquist_dt);
    }
    worst = std::max(worst, std::abs(sig(t) - direct));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("two-tone in-band signal at M = 200") {
  const double k = default_interleave_offset(0.8, 0.4003);
  const auto plan = build_interleaved_schedule(0.8, 0.4003, k, 200, 1);
  for (auto [f1, f2] : {std::pair{0.93, 1.08}, {0.85, 1.15}, {1.0, 1.02}}) {
    auto signal = [&](double t) {
      return 0.6 * std::cos(2 * pi * f1 * t + 0.4) + 0.4 * std::cos(2 * pi * f2 * t - 1.1);
    };
    CHECK(central_rms(reconstruct(sample_fn(plan, signal), plan), signal) < 1e-2);
  }
}

TEST_CASE("reconstruction is linear") {
  const auto plan = build_interleaved_schedule(0.8, 0.4, 1.25, 60, 1);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SampleSet x = sample_fn(plan, [&](double) { return u(rng); });
  SampleSet y = sample_fn(plan, [&](double) { return u(rng); });
  SampleSet z = x;
  const double a = 0.7;
  const double b = -1.3;
  for (std::size_t i = 0; i < z.values.size(); ++i) {
    z.values[i] = a * x.values[i] + b * y.values[i];
  }
  const auto rx = reconstruct(x, plan);
  const auto ry = reconstruct(y, plan);
  const auto rz = reconstruct(z, plan);
  for (double t = 2.5; t < 75.0; t += 0.377) {
    CHECK(std::abs(rz(t) - (a * rx(t) + b * ry(t))) < 1e-12);
  }
}

TEST_CASE("fast rendering agrees with the direct sum") {
  const QubitParams p{1.0, 0.02};
  for (const auto& plan : {build_sinc_schedule(0.8, 0.4, 120, 100),
                           build_interleaved_schedule(0.8, 0.4, 1.25, 120, 100),
                           build_interleaved_schedule(0.8, 0.4003, 0.2499625, 120, 100)}) {
    const auto sig = reconstruct(simulate_record(p, plan, 5).samples(), plan);
    const auto dense = sig.render_uniform(plan.interval() / 16);
    CHECK(dense.start == sig.window_start());
    CHECK(dense.time(dense.values.size() - 1) <= sig.window_end() + 1e-9);
    double worst = 0.0;
    for (std::size_t i = 0; i < dense.values.size(); i += 7) {
      worst = std::max(worst, std::abs(dense.values[i] - sig(dense.time(i))));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("plan mismatches") {
  const QubitParams p{1.0, 0.02};
  const auto sinc_plan = build_sinc_schedule(0.8, 0.4, 20, 1);
  const auto il_plan = build_interleaved_schedule(0.8, 0.4, 1.25, 20, 1);
  const auto s = exact_samples(p, sinc_plan);
  const auto i = exact_samples(p, il_plan);
  CHECK_THROWS_AS(sinc_reconstruct(i, il_plan), PlanMismatch);
  CHECK_THROWS_AS(sinc_reconstruct(i, sinc_plan), PlanMismatch);
  CHECK_THROWS_AS(reconstruct(s, il_plan), PlanMismatch);
  const auto [a, b] = split_series(i, il_plan);
  CHECK_THROWS_AS(interleaved_reconstruct(b, a, il_plan), PlanMismatch);
  SampleSet short_s = s;
  short_s.values.pop_back();
  CHECK_THROWS_AS(sinc_reconstruct(short_s, sinc_plan), PlanMismatch);
}

TEST_CASE("rendering csv") {
  DenseRendering r{1.0, 0.5, {0.25, -1.0}};
  std::ostringstream out;
  write_rendering_csv(out, r);
  CHECK(out.str() == "time,amplitude\n1,0.25\n1.5,-1\n");
}
