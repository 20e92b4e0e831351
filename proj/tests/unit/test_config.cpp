#include <doctest.h>

#include <sstream>
#include <string>

#include "qis/errors.hpp"
#include "qis/harness/config.hpp"

using namespace qis;
using namespace qis::harness;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.ini");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const std::string kBase =
    "[qubit]\n"
    "f = 1.0\n"
    "kappa = 0.02\n"
    "\n"
    "[plan.interleaved]\n"
    "f_L = 0.8\n"
    "B = 0.4\n"
    "M = 160\n"
    "N = 100\n";

}  // namespace

TEST_CASE("minimal config and defaults") {
  const auto cfg = parse(kBase);
  CHECK(cfg.qubit.f == 1.0);
  CHECK(cfg.qubit.kappa == 0.02);
  REQUIRE(cfg.plans.size() == 1);
  CHECK(cfg.plans[0].scheme == Scheme::Interleaved);
  CHECK_FALSE(cfg.plans[0].offset.has_value());
  CHECK(cfg.plans[0].build().offset() == 1.25);
  CHECK(cfg.reps == 20);
  CHECK(cfg.base_seed == 1);
  CHECK(cfg.pipeline.oversample == 16);
  CHECK(cfg.pipeline.zero_pad == 4);
  CHECK_FALSE(cfg.pipeline.band.has_value());
  CHECK_FALSE(cfg.sweep.has_value());
  CHECK(cfg.require_equal_windows);
  CHECK(cfg.find_plan(Scheme::Sinc) == nullptr);
}

TEST_CASE("full config") {
  const auto cfg = parse(
      "# comment\n"
      "[qubit]\nf = 1\nkappa = 0.05 ; trailing\n"
      "[plan.sinc]\nf_L = 0.8\nB = 0.4\nM = 100\nN = 10\n"
      "[plan.interleaved]\nf_L = 0.8\nB = 0.4\nk = 0.9\nM = 100\nN = 10\n"
      "[run]\nseed = 99\nreps = 3\nnoiseless = true\noutput = somewhere\n"
      "[spectrum]\noversample = 8\nzero_pad = 2\nband = 0.85, 1.15\n"
      "[fit]\nkappa_count = 10\namp_count = 5\nshape = lorentzian\n"
      "[sweep]\naxis = M\nvalues = 40, 80,120\n"
      "[timing]\nrequire_equal_windows = false\n");
  CHECK(cfg.plans.size() == 2);
  CHECK(cfg.find_plan(Scheme::Interleaved)->offset == 0.9);
  CHECK(cfg.base_seed == 99);
  CHECK(cfg.reps == 3);
  CHECK(cfg.pipeline.noiseless);
  CHECK(cfg.output_dir == "somewhere");
  CHECK(cfg.pipeline.oversample == 8);
  CHECK(cfg.pipeline.band->first == 0.85);
  CHECK(cfg.pipeline.band->second == 1.15);
  CHECK(cfg.pipeline.grid.kappa_count == 10);
  CHECK(cfg.pipeline.grid.shape == ResonanceShape::Lorentzian);
  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->axis == SweepAxis::M);
  CHECK(cfg.sweep->values == std::vector<std::size_t>{40, 80, 120});
  CHECK_FALSE(cfg.require_equal_windows);
}

TEST_CASE("errors name file, line, section and key") {
  CHECK(error_of(kBase + "[run]\nreps = 0\n") == "test.ini:11: [run] reps: must be at least 1");
  CHECK(error_of("[qubit]\nf = abc\n") == "test.ini:2: [qubit] f: expected a number, got 'abc'");
  CHECK(error_of(kBase + "[run]\ncolour = red\n") == "test.ini:11: [run] colour: unknown key");
  CHECK(error_of("[qbit]\n") == "test.ini:1: [qbit] unknown section");
  CHECK(error_of("[qubit]\nf 1\n") == "test.ini:2: [qubit] expected key = value");
  CHECK(error_of("f = 1\n") == "test.ini:1: key outside of any section");
  CHECK(error_of("[qubit]\nf = 1\nf = 2\n") == "test.ini:3: [qubit] f: duplicate key");
  CHECK(error_of("[qubit\n") == "test.ini:1: unterminated section header");
}

TEST_CASE("semantic validation") {
  CHECK(error_of("[qubit]\nkappa = 0.1\n").find("[qubit] f: missing required key") !=
        std::string::npos);
  CHECK(error_of("[qubit]\nf = 0.05\nkappa = 0.2\n").find("[qubit]") != std::string::npos);
  CHECK(error_of("[qubit]\nf = 1\n").find("at least one of") != std::string::npos);

  std::string odd = kBase;
  odd.replace(odd.find("M = 160"), 7, "M = 161");
  CHECK(error_of(odd).find("test.ini:5: [plan.interleaved]") == 0);

  CHECK(error_of(kBase + "[plan.interleaved]\n").find("duplicate section") != std::string::npos);
  CHECK(error_of(kBase + "[sweep]\naxis = N\nvalues = 10, 0\n") ==
        "test.ini:12: [sweep] values: values must be positive");
  CHECK(error_of(kBase + "[sweep]\naxis = N\nvalues =\n").find("[sweep] values") !=
        std::string::npos);
  CHECK(error_of(kBase + "[sweep]\naxis = Q\nvalues = 10\n") ==
        "test.ini:11: [sweep] axis: expected N or M, got 'Q'");
  CHECK(error_of(kBase + "[sweep]\nvalues = 10\n").find("[sweep] axis: missing") !=
        std::string::npos);
  CHECK(error_of(kBase + "[spectrum]\nband = 1.2, 0.8\n").find("[spectrum] band") !=
        std::string::npos);
  CHECK(error_of(kBase + "[run]\nnoiseless = maybe\n").find("expected true or false") !=
        std::string::npos);
  CHECK(error_of(kBase + "[fit]\nshape = gaussian\n").find("[fit] shape") != std::string::npos);
}

TEST_CASE("plan spec helpers") {
  const auto cfg = parse(kBase);
  const PlanSpec& spec = cfg.plans[0];
  CHECK(spec.with_count(40).build().count() == 40);
  CHECK(spec.with_repeats(7).build().repeats() == 7);
  CHECK(trial_seed(10, 3) == 13);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_config("/nonexistent/path.ini"), ConfigError);
}
