#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>

#include "qis/errors.hpp"
#include "qis/harness/experiments.hpp"

using namespace qis;
using namespace qis::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qis_harness_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

ExperimentConfig parse(const std::string& text, const fs::path& out) {
  std::istringstream in(text);
  auto cfg = parse_config(in, "test.ini");
  cfg.output_dir = out;
  return cfg;
}

const std::string kFig1 =
    "[qubit]\nf = 1.0\nkappa = 0.1\n"
    "[plan.sinc]\nf_L = 0.8\nB = 0.4003\nM = 42\nN = 100\n"
    "[plan.interleaved]\nf_L = 0.8\nB = 0.4003\nM = 18\nN = 100\n"
    "[run]\nreps = 2\n";

const std::string kFig2 =
    "[qubit]\nf = 1.0\nkappa = 0.02\n"
    "[plan.interleaved]\nf_L = 0.8\nB = 0.4\nM = 160\nN = 100\n"
    "[spectrum]\nband = 0.8, 1.2\n";

}  // namespace

TEST_CASE("reconstruction run") {
  const auto dir = scratch("recon");
  const auto report = run_reconstruction(parse(kFig1, dir));
  REQUIRE(report.schemes.size() == 2);
  CHECK(report.schemes[0].plan.count() == 42);
  CHECK(report.schemes[1].plan.count() == 18);
  CHECK(report.sample_ratio == doctest::Approx(18.0 / 42.0).epsilon(1e-15));
  CHECK(report.schemes[0].rms.size() == 2);
  CHECK(report.schemes[1].kernel_asymmetry > 0.0);
  for (const auto& f : report.files) {
    CHECK(fs::exists(dir / f));
  }
  CHECK(fs::exists(dir / "reconstruct_summary.json"));
  const std::string a = slurp(dir / "sinc_rep0_samples.csv");
  const std::string b = slurp(dir / "sinc_rep1_samples.csv");
  CHECK(a != b);
  auto column0 = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::string times;
    while (std::getline(in, line)) {
      times += line.substr(0, line.find(',')) + ";";
    }
    return times;
  };
  CHECK(column0(a) == column0(b));
}

TEST_CASE("undamped reference is the cosine") {
  const auto dir = scratch("undamped");
  std::string text = kFig1;
  text.replace(text.find("kappa = 0.1"), 11, "kappa = 0.0");
  run_reconstruction(parse(text, dir));
  std::ifstream in(dir / "sinc_reference.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "time,amplitude");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const double t = std::stod(line.substr(0, line.find(',')));
    const double v = std::stod(line.substr(line.find(',') + 1));
    CHECK(v == std::cos(2 * std::numbers::pi * 1.0 * t));
    ++rows;
  }
  CHECK(rows > 100);
}

TEST_CASE("reconstruction needs both schemes") {
  CHECK_THROWS_AS(run_reconstruction(parse(kFig2, scratch("one"))), ConfigError);
}

TEST_CASE("timing report") {
  const auto s = build_sinc_schedule(0.8, 0.4003, 42, 100);
  const auto i = build_interleaved_schedule(0.8, 0.4003, 0.2499625, 18, 100);
  const SamplingPlan fig1[] = {s, i};
  CHECK_THROWS_AS(report_timing(fig1, true), WindowMismatch);
  const auto r = report_timing(fig1, false);
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0].count_ratio == doctest::Approx(18.0 / 42.0).epsilon(1e-15));
  CHECK(std::abs(r.pairs[0].rate_ratio - 0.4003 / 1.2003) < 1e-12);

  const SamplingPlan same[] = {i, i};
  const auto one = report_timing(same);
  CHECK(one.pairs[0].count_ratio == 1.0);
  CHECK(one.pairs[0].time_saving == 1.0);
  CHECK(one.pairs[0].rate_ratio == 1.0);

  const auto il2 = build_interleaved_schedule(0.8, 0.4, 1.25, 160, 100);
  const auto sinc2 = equivalent_sinc_plan(il2);
  CHECK(std::abs(sinc2.observation_end() - il2.observation_end()) <= 0.5 * sinc2.interval());
  const SamplingPlan fig2[] = {sinc2, il2};
  const auto t2 = report_timing(fig2);
  CHECK(t2.pairs[0].time_saving == doctest::Approx(3.0).epsilon(0.05));
  CHECK(std::abs(t2.pairs[0].rate_ratio - 1.0 / 3.0) < 1e-12);

  const SamplingPlan single[] = {il2};
  CHECK_THROWS_AS(report_timing(single), InvalidPlan);
  const SamplingPlan other_band[] = {il2, build_interleaved_schedule(0.8, 0.41, 1.2, 160, 100)};
  CHECK_THROWS_AS(report_timing(other_band, false), PlanMismatch);
}

TEST_CASE("spectrum run") {
  const auto dir = scratch("spectrum");
  auto cfg = parse(kFig2, dir);
  cfg.pipeline.noiseless = true;
  const auto report = run_spectrum(cfg);
  CHECK(std::abs(report.estimate.fit.f_hat - 1.0) < 0.005);
  CHECK(report.timing.pairs[0].time_saving == doctest::Approx(3.0).epsilon(0.05));
  for (const char* f : {"samples.csv", "spectrum.csv", "fit_model.csv", "fit.txt",
                        "spectrum_summary.json"}) {
    CHECK(fs::exists(dir / f));
  }
  CHECK(slurp(dir / "samples.csv").rfind("time,average\n", 0) == 0);

  cfg.pipeline.band = std::make_pair(1.5, 1.9);
  CHECK_THROWS_AS(run_spectrum(cfg), NoPeakInBand);
}

TEST_CASE("sweep rows") {
  auto cfg = parse(
      "[qubit]\nf = 1.0\nkappa = 0.02\n"
      "[plan.sinc]\nf_L = 0.8\nB = 0.4\nM = 160\nN = 50\n"
      "[plan.interleaved]\nf_L = 0.8\nB = 0.4\nM = 160\nN = 50\n"
      "[run]\nreps = 1\n"
      "[sweep]\naxis = M\nvalues = 120, 121\n",
      scratch("sweep"));
  const auto table = sweep_estimates(cfg);
  REQUIRE(table.rows.size() == 4);
  CHECK(table.rows[0].axis_value == 120);
  CHECK(table.rows[0].scheme == Scheme::Sinc);
  CHECK(table.rows[1].scheme == Scheme::Interleaved);
  CHECK(table.rows[0].status == "ok");
  CHECK(table.rows[0].std_tau == 0.0);
  CHECK(table.rows[1].std_tau == 0.0);
  CHECK(table.rows[1].min_total_time > 0.0);
  // Odd M is fine for sinc but not for interleaving.
  CHECK(table.rows[2].status == "ok");
  CHECK(table.rows[3].status.rfind("error: ", 0) == 0);
  CHECK(table.rows[3].trials == 0);
}

TEST_CASE("sweep results do not depend on threading") {
  auto cfg = parse(
      "[qubit]\nf = 1.0\nkappa = 0.02\n"
      "[plan.interleaved]\nf_L = 0.8\nB = 0.4\nM = 80\nN = 100\n"
      "[run]\nreps = 3\n"
      "[sweep]\naxis = N\nvalues = 50, 100\n",
      scratch("threads"));
  const auto a = sweep_estimates(cfg, 1);
  const auto b = sweep_estimates(cfg, 4);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    CHECK(a.rows[r].tau_values == b.rows[r].tau_values);
    CHECK(a.rows[r].f_values == b.rows[r].f_values);
  }
  CHECK_THROWS_AS(sweep_estimates(parse(kFig2, scratch("nosweep"))), ConfigError);
}

TEST_CASE("runs are reproducible byte for byte") {
  const auto d1 = scratch("det1");
  const auto d2 = scratch("det2");
  const auto r1 = run_reconstruction(parse(kFig1, d1));
  run_reconstruction(parse(kFig1, d2));
  for (const auto& f : r1.files) {
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
}

TEST_CASE("more measurements per point do not worsen tau") {
  auto cfg = parse(
      "[qubit]\nf = 1.0\nkappa = 0.02\n"
      "[plan.interleaved]\nf_L = 0.8\nB = 0.4\nM = 160\nN = 100\n"
      "[run]\nreps = 20\n"
      "[spectrum]\nband = 0.8, 1.2\n"
      "[sweep]\naxis = N\nvalues = 10, 200\n",
      scratch("noise"));
  const auto table = sweep_estimates(cfg);
  REQUIRE(table.rows.size() == 2);
  auto mae = [](const SweepRow& row) {
    double s = 0.0;
    for (double t : row.tau_values) {
      s += std::abs(t - 50.0);
    }
    return s / static_cast<double>(row.tau_values.size());
  };
  CHECK(table.rows[1].failures == 0);
  CHECK(mae(table.rows[1]) <= mae(table.rows[0]));
  // Bias direction: the estimate underestimates 1/kappa.
  CHECK(table.rows[1].mean_tau < 50.0);
}
