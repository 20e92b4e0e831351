#include "qis/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "../format.hpp"
#include "qis/errors.hpp"
#include "qis/harness/artifacts.hpp"
#include "qis/interleave_kernel.hpp"
#include "qis/parallel.hpp"

namespace qis::harness {

using detail::fmt_double;
using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v) {
  return std::isfinite(v) ? fmt_double(v) : std::string("nan");
}

void write_acquisition(ArtifactWriter& writer, const std::string& name, const Acquisition& acq) {
  writer.write(name, [&](std::ostream& out) {
    if (acq.record) {
      write_record_csv(out, *acq.record);
    } else {
      write_samples_csv(out, acq.samples);
    }
  });
}

ordered_json fit_json(const ResonanceFit& fit) {
  return {{"f_hat", fit.f_hat},
          {"kappa_hat", fit.kappa_hat},
          {"tau_hat", fit.tau_hat},
          {"amp_hat", fit.amp_hat},
          {"residual", fit.residual},
          {"band", {fit.band_lo, fit.band_hi}},
          {"peak_frequency", fit.peak_frequency},
          {"peak_ratio", fit.peak_ratio},
          {"bins", fit.bins}};
}

ordered_json timing_json(const TimingReport& report) {
  ordered_json j;
  j["plans"] = ordered_json::array();
  for (const auto& r : report.rows) {
    j["plans"].push_back({{"scheme", std::string(scheme_name(r.scheme))},
                          {"M", r.count},
                          {"N", r.repeats},
                          {"interval", r.interval},
                          {"offset", r.offset},
                          {"window_end", r.window_end},
                          {"sample_rate", r.sample_rate},
                          {"min_total_time", r.total_time}});
  }
  j["pairs"] = ordered_json::array();
  for (const auto& p : report.pairs) {
    j["pairs"].push_back({{"first", p.first},
                          {"second", p.second},
                          {"count_ratio", p.count_ratio},
                          {"rate_ratio", p.rate_ratio},
                          {"time_saving", p.time_saving}});
  }
  return j;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) {
    return kNaN;
  }
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for a single value.
double std_of(const std::vector<double>& v) {
  if (v.empty()) {
    return kNaN;
  }
  if (v.size() == 1) {
    return 0.0;
  }
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) {
    ss += (x - m) * (x - m);
  }
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

Acquisition acquire(const QubitParams& params, const SamplingPlan& plan, std::uint64_t seed,
                    bool noiseless) {
  if (noiseless) {
    return {exact_samples(params, plan), std::nullopt};
  }
  MeasurementRecord record = simulate_record(params, plan, seed);
  SampleSet samples = record.samples();
  return {std::move(samples), std::move(record)};
}

std::pair<double, double> fit_band(const PipelineOptions& options, const SamplingPlan& plan) {
  if (options.band) {
    return *options.band;
  }
  return {plan.f_lower(), plan.f_upper()};
}

SpectralEstimate estimate_once(const QubitParams& params, const SamplingPlan& plan,
                               std::uint64_t seed, const PipelineOptions& options) {
  Acquisition data = acquire(params, plan, seed, options.noiseless);
  const ReconstructedSignal signal = reconstruct(data.samples, plan);
  Spectrum spectrum = amplitude_spectrum(signal, options.oversample, options.zero_pad);
  const auto [lo, hi] = fit_band(options, plan);
  ResonanceFit fit = fit_resonance(spectrum, lo, hi, options.grid);
  return {std::move(data), std::move(spectrum), fit};
}

double central_rms(const DenseRendering& rendering, const QubitParams& params) {
  const std::size_t n = rendering.values.size();
  if (n == 0) {
    throw EmptyWindow("empty rendering");
  }
  const double span = rendering.time(n - 1) - rendering.start;
  const double lo = rendering.start + 0.25 * span;
  const double hi = rendering.start + 0.75 * span;
  double ss = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = rendering.time(i);
    if (t < lo || t > hi) {
      continue;
    }
    const double d = rendering.values[i] - bloch_at(params, t).rz;
    ss += d * d;
    ++used;
  }
  if (used == 0) {
    throw EmptyWindow("no rendered points in the central half window");
  }
  return std::sqrt(ss / static_cast<double>(used));
}

ReconstructionReport run_reconstruction(const ExperimentConfig& config) {
  const PlanSpec* sinc = config.find_plan(Scheme::Sinc);
  const PlanSpec* inter = config.find_plan(Scheme::Interleaved);
  if (!sinc || !inter) {
    throw ConfigError("reconstruct needs both [plan.sinc] and [plan.interleaved]");
  }
  ArtifactWriter writer(config.output_dir);
  ReconstructionReport report;

  for (const PlanSpec* spec : {sinc, inter}) {
    SchemeReconstruction sr;
    sr.spec = *spec;
    sr.plan = spec->build();
    const std::string tag(scheme_name(sr.plan.scheme()));
    const double step = sr.plan.interval() / static_cast<double>(config.pipeline.oversample);
    if (sr.plan.scheme() == Scheme::Interleaved) {
      sr.kernel_asymmetry = kernel_asymmetry(
          make_kernel_params(sr.plan.f_lower(), sr.plan.bandwidth(), sr.plan.offset()));
    }
    for (std::size_t j = 0; j < config.reps; ++j) {
      const Acquisition acq =
          acquire(config.qubit, sr.plan, trial_seed(config.base_seed, j), config.pipeline.noiseless);
      const ReconstructedSignal signal = reconstruct(acq.samples, sr.plan);
      const DenseRendering rendering = signal.render_uniform(step);
      sr.rms.push_back(central_rms(rendering, config.qubit));

      const std::string prefix = tag + "_rep" + std::to_string(j);
      write_acquisition(writer, prefix + "_samples.csv", acq);
      writer.write(prefix + "_reconstruction.csv",
                   [&](std::ostream& out) { write_rendering_csv(out, rendering); });
      if (j == 0) {
        DenseRendering reference = rendering;
        for (std::size_t i = 0; i < reference.values.size(); ++i) {
          reference.values[i] = bloch_at(config.qubit, reference.time(i)).rz;
        }
        writer.write(tag + "_reference.csv",
                     [&](std::ostream& out) { write_rendering_csv(out, reference); });
      }
    }
    report.schemes.push_back(std::move(sr));
  }

  const auto& s = report.schemes[0].plan;
  const auto& i = report.schemes[1].plan;
  report.sample_ratio = static_cast<double>(i.count()) / static_cast<double>(s.count());

  ordered_json summary = run_metadata(config, "reconstruct");
  summary["schemes"] = ordered_json::array();
  for (const auto& sr : report.schemes) {
    ordered_json j;
    j["scheme"] = std::string(scheme_name(sr.plan.scheme()));
    j["samples"] = sr.plan.count();
    j["measurements"] = sr.plan.count() * sr.plan.repeats();
    j["rms_central_half"] = sr.rms;
    j["mean_rms_central_half"] = mean_of(sr.rms);
    if (sr.plan.scheme() == Scheme::Interleaved) {
      j["kernel_asymmetry"] = sr.kernel_asymmetry;
    }
    summary["schemes"].push_back(j);
  }
  summary["sample_ratio"] = report.sample_ratio;
  summary["sample_ratio_counts"] = std::to_string(i.count()) + "/" + std::to_string(s.count());
  summary["files"] = writer.files();
  writer.write_json("reconstruct_summary.json", summary);
  report.files = writer.files();
  return report;
}

TimingReport report_timing(std::span<const SamplingPlan> plans, bool require_equal_windows) {
  if (plans.size() < 2) {
    throw InvalidPlan("timing comparison needs at least two plans");
  }
  TimingReport report;
  for (const auto& p : plans) {
    TimingRow r;
    r.scheme = p.scheme();
    r.count = p.count();
    r.repeats = p.repeats();
    r.interval = p.interval();
    r.offset = p.offset();
    r.window_end = p.observation_end();
    r.sample_rate = p.total_sample_rate();
    r.total_time = min_total_time(p);
    report.rows.push_back(r);
  }
  for (std::size_t a = 0; a < plans.size(); ++a) {
    for (std::size_t b = a + 1; b < plans.size(); ++b) {
      const auto& pa = plans[a];
      const auto& pb = plans[b];
      const double band_tol = 1e-12 * std::max(1.0, pa.f_upper());
      if (std::abs(pa.f_lower() - pb.f_lower()) > band_tol ||
          std::abs(pa.bandwidth() - pb.bandwidth()) > band_tol) {
        throw PlanMismatch("timing comparison needs plans over the same band");
      }
      const double ea = pa.observation_end();
      const double eb = pb.observation_end();
      if (require_equal_windows && std::abs(ea - eb) > 0.01 * std::max(ea, eb)) {
        throw WindowMismatch("observation windows differ by more than 1%: " + fmt_double(ea) +
                             " vs " + fmt_double(eb));
      }
      const auto& ra = report.rows[a];
      const auto& rb = report.rows[b];
      report.pairs.push_back({a, b, static_cast<double>(rb.count) / static_cast<double>(ra.count),
                              rb.sample_rate / ra.sample_rate, ra.total_time / rb.total_time});
    }
  }
  return report;
}

SamplingPlan equivalent_sinc_plan(const SamplingPlan& plan) {
  const double rate = 2.0 * plan.f_upper();
  const auto m = static_cast<std::size_t>(std::max(1.0, std::round(plan.observation_end() * rate)));
  return build_sinc_schedule(plan.f_lower(), plan.bandwidth(), m, plan.repeats());
}

SpectrumReport run_spectrum(const ExperimentConfig& config) {
  const PlanSpec* spec = config.find_plan(Scheme::Interleaved);
  if (!spec) {
    throw ConfigError("spectrum needs a [plan.interleaved] section");
  }
  const SamplingPlan plan = spec->build();
  SpectralEstimate est =
      estimate_once(config.qubit, plan, trial_seed(config.base_seed, 0), config.pipeline);
  const SamplingPlan plans[] = {equivalent_sinc_plan(plan), plan};
  TimingReport timing = report_timing(plans, true);

  ArtifactWriter writer(config.output_dir);
  write_acquisition(writer, "samples.csv", est.data);
  writer.write("spectrum.csv", [&](std::ostream& out) { write_spectrum_csv(out, est.spectrum); });
  writer.write("fit_model.csv",
               [&](std::ostream& out) { write_fit_model_csv(out, est.spectrum, est.fit); });
  writer.write("fit.txt",
               [&](std::ostream& out) { write_fit_summary(out, est.fit, config.pipeline.grid); });

  ordered_json summary = run_metadata(config, "spectrum");
  summary["seed"] = trial_seed(config.base_seed, 0);
  summary["spectrum_resolution"] = est.spectrum.resolution;
  summary["fit"] = fit_json(est.fit);
  summary["timing_vs_sinc"] = timing_json(timing);
  summary["time_saving"] = timing.pairs.front().time_saving;
  summary["files"] = writer.files();
  writer.write_json("spectrum_summary.json", summary);

  return {plan, std::move(est), std::move(timing), writer.files()};
}

SweepTable sweep_estimates(const ExperimentConfig& config, std::size_t max_threads) {
  if (!config.sweep) {
    throw ConfigError("sweep needs a [sweep] section");
  }
  SweepTable table;
  table.axis = config.sweep->axis;

  struct Cell {
    std::optional<SamplingPlan> plan;
    std::string error;
  };
  std::vector<Cell> cells;
  for (std::size_t value : config.sweep->values) {
    for (const auto& spec : config.plans) {
      SweepRow row;
      row.axis_value = value;
      row.scheme = spec.scheme;
      Cell cell;
      try {
        cell.plan = (table.axis == SweepAxis::N ? spec.with_repeats(value) : spec.with_count(value))
                        .build();
        row.min_total_time = min_total_time(*cell.plan);
      } catch (const Error& e) {
        cell.error = e.what();
        row.min_total_time = kNaN;
      }
      table.rows.push_back(std::move(row));
      cells.push_back(std::move(cell));
    }
  }

  const std::size_t reps = config.reps;
  struct Outcome {
    std::optional<ResonanceFit> fit;
    std::string error;
  };
  std::vector<Outcome> outcomes(cells.size() * reps);
  parallel_for(
      outcomes.size(),
      [&](std::size_t idx) {
        const Cell& cell = cells[idx / reps];
        if (!cell.plan) {
          return;
        }
        try {
          outcomes[idx].fit =
              estimate_once(config.qubit, *cell.plan, trial_seed(config.base_seed, idx % reps),
                            config.pipeline)
                  .fit;
        } catch (const std::exception& e) {
          outcomes[idx].error = e.what();
        }
      },
      max_threads);

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    SweepRow& row = table.rows[r];
    if (!cells[r].plan) {
      row.status = "error: " + cells[r].error;
      row.mean_tau = row.std_tau = row.mean_f = kNaN;
      continue;
    }
    row.trials = reps;
    std::string first_error;
    for (std::size_t j = 0; j < reps; ++j) {
      const Outcome& o = outcomes[r * reps + j];
      if (o.fit) {
        row.tau_values.push_back(o.fit->tau_hat);
        row.f_values.push_back(o.fit->f_hat);
      } else {
        ++row.failures;
        if (first_error.empty()) {
          first_error = o.error;
        }
      }
    }
    row.mean_tau = mean_of(row.tau_values);
    row.std_tau = std_of(row.tau_values);
    row.mean_f = mean_of(row.f_values);
    row.status = row.failures == 0
                     ? std::string("ok")
                     : "failed " + std::to_string(row.failures) + "/" + std::to_string(reps) +
                           ": " + first_error;
  }
  return table;
}

SweepTable run_sweep(const ExperimentConfig& config, std::vector<std::string>* files) {
  SweepTable table = sweep_estimates(config);
  const std::string axis = table.axis == SweepAxis::N ? "N" : "M";

  ArtifactWriter writer(config.output_dir);
  writer.write("sweep.csv", [&](std::ostream& out) {
    out << "axis,value,scheme,trials,failures,mean_tau,std_tau,mean_f,min_total_time,status\n";
    for (const auto& row : table.rows) {
      out << axis << ',' << row.axis_value << ',' << scheme_name(row.scheme) << ',' << row.trials
          << ',' << row.failures << ',' << csv_number(row.mean_tau) << ','
          << csv_number(row.std_tau) << ',' << csv_number(row.mean_f) << ','
          << csv_number(row.min_total_time) << ',' << csv_field(row.status) << '\n';
    }
  });

  ordered_json summary = run_metadata(config, "sweep");
  summary["axis"] = axis;
  summary["rows"] = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json tau = ordered_json::array();
    for (double t : row.tau_values) {
      tau.push_back(number_or_null(t));
    }
    summary["rows"].push_back({{"value", row.axis_value},
                               {"scheme", std::string(scheme_name(row.scheme))},
                               {"trials", row.trials},
                               {"failures", row.failures},
                               {"mean_tau", number_or_null(row.mean_tau)},
                               {"std_tau", number_or_null(row.std_tau)},
                               {"mean_f", number_or_null(row.mean_f)},
                               {"min_total_time", number_or_null(row.min_total_time)},
                               {"status", row.status},
                               {"tau_values", tau}});
  }
  summary["files"] = writer.files();
  writer.write_json("sweep_summary.json", summary);
  if (files) {
    *files = writer.files();
  }
  return table;
}

TimingReport run_timing(const ExperimentConfig& config, std::vector<std::string>* files) {
  std::vector<SamplingPlan> plans;
  for (const auto& spec : config.plans) {
    plans.push_back(spec.build());
  }
  if (plans.size() == 1 && plans.front().scheme() == Scheme::Interleaved) {
    plans.insert(plans.begin(), equivalent_sinc_plan(plans.front()));
  }
  TimingReport report = report_timing(plans, config.require_equal_windows);

  ArtifactWriter writer(config.output_dir);
  writer.write("timing.csv", [&](std::ostream& out) {
    out << "scheme,M,N,interval,offset,window_end,sample_rate,min_total_time\n";
    for (const auto& r : report.rows) {
      out << scheme_name(r.scheme) << ',' << r.count << ',' << r.repeats << ','
          << fmt_double(r.interval) << ',' << fmt_double(r.offset) << ','
          << fmt_double(r.window_end) << ',' << fmt_double(r.sample_rate) << ','
          << fmt_double(r.total_time) << '\n';
    }
  });
  ordered_json summary = run_metadata(config, "timing");
  summary["require_equal_windows"] = config.require_equal_windows;
  summary["timing"] = timing_json(report);
  summary["files"] = writer.files();
  writer.write_json("timing_summary.json", summary);
  if (files) {
    *files = writer.files();
  }
  return report;
}

}  // namespace qis::harness
