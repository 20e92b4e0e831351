#include "qis/harness/artifacts.hpp"

#include <cmath>

#include "qis/errors.hpp"

namespace qis::harness {

ArtifactWriter::ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw Error("cannot create output directory " + dir_.string() + ": " + ec.message());
  }
}

std::ofstream ArtifactWriter::open(const std::string& name) {
  std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open " + (dir_ / name).string() + " for writing");
  }
  return out;
}

void ArtifactWriter::finish(std::ofstream& out, const std::string& name) {
  out.flush();
  if (!out) {
    throw Error("write failed for " + (dir_ / name).string());
  }
  files_.push_back(name);
}

void ArtifactWriter::write_json(const std::string& name, const nlohmann::ordered_json& value) {
  write(name, [&](std::ostream& out) { out << value.dump(2) << '\n'; });
}

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) {
    return nullptr;
  }
  return v;
}

nlohmann::ordered_json plan_json(const SamplingPlan& plan) {
  nlohmann::ordered_json j;
  j["scheme"] = std::string(scheme_name(plan.scheme()));
  j["f_L"] = plan.f_lower();
  j["B"] = plan.bandwidth();
  if (plan.scheme() == Scheme::Interleaved) {
    j["k"] = plan.offset();
  }
  j["interval"] = plan.interval();
  j["M"] = plan.count();
  j["N"] = plan.repeats();
  j["first_time"] = plan.times().front();
  j["last_time"] = plan.observation_end();
  j["min_total_time"] = min_total_time(plan);
  return j;
}

nlohmann::ordered_json run_metadata(const ExperimentConfig& config, const std::string& command) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["qubit"] = {{"f", config.qubit.f}, {"kappa", config.qubit.kappa}};
  j["plans"] = nlohmann::ordered_json::array();
  for (const auto& spec : config.plans) {
    j["plans"].push_back(plan_json(spec.build()));
  }
  j["reps"] = config.reps;
  j["base_seed"] = config.base_seed;
  j["trial_seed_rule"] = "seed of trial j = base_seed + j";
  j["noiseless"] = config.pipeline.noiseless;
  j["spectrum"] = {{"oversample", config.pipeline.oversample},
                   {"zero_pad", config.pipeline.zero_pad}};
  if (config.pipeline.band) {
    j["spectrum"]["band"] = {config.pipeline.band->first, config.pipeline.band->second};
  }
  j["fit_grid"] = config.pipeline.grid.describe();
  return j;
}

}  // namespace qis::harness
