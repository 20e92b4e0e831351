#include <cstdint>
#include <exception>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qis/errors.hpp"
#include "qis/harness/config.hpp"
#include "qis/harness/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> reps;
  bool noiseless = false;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "experiment config file")->required();
  sub->add_option("--seed", o.seed, "base seed (trial j uses seed + j)");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--reps", o.reps, "repetitions per configuration");
  sub->add_flag("--noiseless", o.noiseless, "use exact r_z instead of simulated averages");
}

qis::harness::ExperimentConfig load(const Overrides& o) {
  auto cfg = qis::harness::load_config(o.config);
  if (o.seed) {
    cfg.base_seed = *o.seed;
  }
  if (o.out) {
    cfg.output_dir = *o.out;
  }
  if (o.reps) {
    if (*o.reps < 1) {
      throw qis::ConfigError("--reps must be at least 1");
    }
    cfg.reps = *o.reps;
  }
  if (o.noiseless) {
    cfg.pipeline.noiseless = true;
  }
  return cfg;
}

void print_files(const qis::harness::ExperimentConfig& cfg, const std::vector<std::string>& files) {
  std::cout << "wrote " << files.size() << " files to " << cfg.output_dir.string() << "\n";
}

int run(const std::string& command, const Overrides& o) {
  using namespace qis::harness;
  const ExperimentConfig cfg = load(o);
  std::cout << std::setprecision(6);
  if (command == "reconstruct") {
    const auto report = run_reconstruction(cfg);
    for (const auto& s : report.schemes) {
      double mean = 0.0;
      for (double r : s.rms) {
        mean += r;
      }
      mean /= static_cast<double>(s.rms.size());
      std::cout << qis::scheme_name(s.plan.scheme()) << ": M=" << s.plan.count()
                << " mean central RMS=" << mean << "\n";
    }
    std::cout << "sample ratio (interleaved/sinc): " << report.sample_ratio << "\n";
    print_files(cfg, report.files);
  } else if (command == "spectrum") {
    const auto report = run_spectrum(cfg);
    const auto& fit = report.estimate.fit;
    std::cout << "f_hat=" << fit.f_hat << " kappa_hat=" << fit.kappa_hat
              << " tau_hat=" << fit.tau_hat << "\n";
    std::cout << "time saving vs equivalent sinc plan: " << report.timing.pairs.front().time_saving
              << "\n";
    print_files(cfg, report.files);
  } else if (command == "sweep") {
    std::vector<std::string> files;
    const auto table = run_sweep(cfg, &files);
    for (const auto& row : table.rows) {
      std::cout << qis::scheme_name(row.scheme) << " " << row.axis_value
                << ": tau=" << row.mean_tau << " +- " << row.std_tau << " f=" << row.mean_f
                << " [" << row.status << "]\n";
    }
    print_files(cfg, files);
  } else {
    std::vector<std::string> files;
    const auto report = run_timing(cfg, &files);
    for (const auto& r : report.rows) {
      std::cout << qis::scheme_name(r.scheme) << ": M=" << r.count << " window_end=" << r.window_end
                << " T_min=" << r.total_time << "\n";
    }
    for (const auto& p : report.pairs) {
      std::cout << "plans " << p.first << "/" << p.second << ": count ratio " << p.count_ratio
                << ", rate ratio " << p.rate_ratio << ", time saving " << p.time_saving << "\n";
    }
    print_files(cfg, files);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qubit characterization by sub-Nyquist sampling"};
  app.require_subcommand(1);
  Overrides o;
  for (const char* name : {"reconstruct", "spectrum", "sweep", "timing"}) {
    add_common(app.add_subcommand(name), o);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, o);
  } catch (const qis::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
