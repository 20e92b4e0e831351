#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "qis/harness/config.hpp"

namespace qis::harness {

/// Writes named files into one output directory. Each file is written
/// whole under a lock, so concurrent producers never interleave.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir);

  template <typename Fn>
  void write(const std::string& name, Fn&& fn) {
    std::lock_guard lock(mutex_);
    std::ofstream out = open(name);
    fn(out);
    finish(out, name);
  }

  void write_json(const std::string& name, const nlohmann::ordered_json& value);

  const std::vector<std::string>& files() const { return files_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::ofstream open(const std::string& name);
  void finish(std::ofstream& out, const std::string& name);

  std::filesystem::path dir_;
  std::mutex mutex_;
  std::vector<std::string> files_;
};

nlohmann::ordered_json plan_json(const SamplingPlan& plan);

/// Run metadata shared by every summary: parameters, plans, seeds.
nlohmann::ordered_json run_metadata(const ExperimentConfig& config, const std::string& command);

/// JSON number, or null when not finite.
nlohmann::ordered_json number_or_null(double v);

}  // namespace qis::harness
