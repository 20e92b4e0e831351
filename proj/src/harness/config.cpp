#include "qis/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>

#include "qis/errors.hpp"
#include "qis/interleave_kernel.hpp"

namespace qis::harness {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string::npos ? s.size() : comma;
    out.push_back(trim(std::string_view(s).substr(start, end - start)));
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  void read(std::istream& in) {
    std::string raw;
    std::string section;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      std::string text = raw;
      const auto hash = text.find_first_of("#;");
      if (hash != std::string::npos) {
        text.erase(hash);
      }
      text = trim(text);
      if (text.empty()) {
        continue;
      }
      if (text.front() == '[') {
        if (text.back() != ']') {
          fail(line, "", "", "unterminated section header");
        }
        section = trim(std::string_view(text).substr(1, text.size() - 2));
        if (!known_sections().contains(section)) {
          fail(line, section, "", "unknown section");
        }
        if (!sections_.insert(section).second) {
          fail(line, section, "", "duplicate section");
        }
        section_lines_[section] = line;
        continue;
      }
      const auto eq = text.find('=');
      if (eq == std::string::npos) {
        fail(line, section, "", "expected key = value");
      }
      if (section.empty()) {
        fail(line, "", "", "key outside of any section");
      }
      const std::string key = trim(std::string_view(text).substr(0, eq));
      const std::string value = trim(std::string_view(text).substr(eq + 1));
      if (!known_keys(section).contains(key)) {
        fail(line, section, key, "unknown key");
      }
      auto& slot = entries_[section];
      if (slot.contains(key)) {
        fail(line, section, key, "duplicate key");
      }
      slot[key] = {value, line};
    }
  }

  bool has_section(const std::string& s) const { return sections_.contains(s); }
  std::size_t section_line(const std::string& s) const {
    auto it = section_lines_.find(s);
    return it == section_lines_.end() ? 0 : it->second;
  }

  const Entry* find(const std::string& section, const std::string& key) const {
    auto s = entries_.find(section);
    if (s == entries_.end()) {
      return nullptr;
    }
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  double number(const std::string& section, const std::string& key,
                std::optional<double> fallback) const {
    const Entry* e = find(section, key);
    if (!e) {
      if (!fallback) {
        fail(section_line(section), section, key, "missing required key");
      }
      return *fallback;
    }
    return parse_double(*e, section, key, e->value);
  }

  std::optional<double> optional_number(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) {
      return std::nullopt;
    }
    return parse_double(*e, section, key, e->value);
  }

  std::uint64_t integer(const std::string& section, const std::string& key,
                        std::optional<std::uint64_t> fallback) const {
    const Entry* e = find(section, key);
    if (!e) {
      if (!fallback) {
        fail(section_line(section), section, key, "missing required key");
      }
      return *fallback;
    }
    return parse_uint(*e, section, key, e->value);
  }

  bool boolean(const std::string& section, const std::string& key, bool fallback) const {
    const Entry* e = find(section, key);
    if (!e) {
      return fallback;
    }
    if (e->value == "true" || e->value == "1" || e->value == "yes") {
      return true;
    }
    if (e->value == "false" || e->value == "0" || e->value == "no") {
      return false;
    }
    fail(e->line, section, key, "expected true or false, got '" + e->value + "'");
  }

  std::vector<double> number_list(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    std::vector<double> out;
    if (!e) {
      return out;
    }
    for (const auto& item : split_list(e->value)) {
      out.push_back(parse_double(*e, section, key, item));
    }
    return out;
  }

  std::vector<std::uint64_t> integer_list(const std::string& section,
                                          const std::string& key) const {
    const Entry* e = find(section, key);
    std::vector<std::uint64_t> out;
    if (!e) {
      return out;
    }
    for (const auto& item : split_list(e->value)) {
      out.push_back(parse_uint(*e, section, key, item));
    }
    return out;
  }

  [[noreturn]] void fail(std::size_t line, const std::string& section, const std::string& key,
                         const std::string& why) const {
    std::string msg = std::string(source_) + ":" + std::to_string(line) + ": ";
    if (!section.empty()) {
      msg += "[" + section + "] ";
    }
    if (!key.empty()) {
      msg += key + ": ";
    }
    throw ConfigError(msg + why);
  }

 private:
  static const std::set<std::string>& known_sections() {
    static const std::set<std::string> s{"qubit", "plan.sinc", "plan.interleaved", "run",
                                         "spectrum", "fit", "sweep", "timing"};
    return s;
  }

  static const std::set<std::string>& known_keys(const std::string& section) {
    static const std::map<std::string, std::set<std::string>> keys{
        {"qubit", {"f", "kappa"}},
        {"plan.sinc", {"f_L", "B", "M", "N"}},
        {"plan.interleaved", {"f_L", "B", "k", "M", "N"}},
        {"run", {"seed", "reps", "noiseless", "output"}},
        {"spectrum", {"oversample", "zero_pad", "band"}},
        {"fit",
         {"f_step", "kappa_min", "kappa_max", "kappa_count", "amp_min", "amp_max", "amp_count",
          "shape"}},
        {"sweep", {"axis", "values"}},
        {"timing", {"require_equal_windows"}},
    };
    return keys.at(section);
  }

  double parse_double(const Entry& e, const std::string& section, const std::string& key,
                      const std::string& text) const {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
      fail(e.line, section, key, "expected a number, got '" + text + "'");
    }
    return v;
  }

  std::uint64_t parse_uint(const Entry& e, const std::string& section, const std::string& key,
                           const std::string& text) const {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      fail(e.line, section, key, "expected a non-negative integer, got '" + text + "'");
    }
    return v;
  }

  std::string_view source_;
  std::set<std::string> sections_;
  std::map<std::string, std::size_t> section_lines_;
  std::map<std::string, std::map<std::string, Entry>> entries_;
};

PlanSpec read_plan(const Parser& p, const std::string& section, Scheme scheme) {
  PlanSpec spec;
  spec.scheme = scheme;
  spec.f_lower = p.number(section, "f_L", std::nullopt);
  spec.bandwidth = p.number(section, "B", std::nullopt);
  spec.count = p.integer(section, "M", std::nullopt);
  spec.repeats = p.integer(section, "N", std::nullopt);
  if (scheme == Scheme::Interleaved) {
    spec.offset = p.optional_number(section, "k");
  }
  try {
    spec.build();
  } catch (const Error& e) {
    p.fail(p.section_line(section), section, "", e.what());
  }
  return spec;
}

}  // namespace

SamplingPlan PlanSpec::build() const {
  if (scheme == Scheme::Sinc) {
    return build_sinc_schedule(f_lower, bandwidth, count, repeats);
  }
  const double k = offset ? *offset : default_interleave_offset(f_lower, bandwidth);
  return build_interleaved_schedule(f_lower, bandwidth, k, count, repeats);
}

PlanSpec PlanSpec::with_count(std::size_t m) const {
  PlanSpec copy = *this;
  copy.count = m;
  return copy;
}

PlanSpec PlanSpec::with_repeats(std::size_t n) const {
  PlanSpec copy = *this;
  copy.repeats = n;
  return copy;
}

const PlanSpec* ExperimentConfig::find_plan(Scheme scheme) const {
  for (const auto& p : plans) {
    if (p.scheme == scheme) {
      return &p;
    }
  }
  return nullptr;
}

ExperimentConfig parse_config(std::istream& in, std::string_view source) {
  Parser p(source);
  p.read(in);
  ExperimentConfig cfg;

  if (!p.has_section("qubit")) {
    p.fail(0, "qubit", "", "missing required section");
  }
  cfg.qubit.f = p.number("qubit", "f", std::nullopt);
  cfg.qubit.kappa = p.number("qubit", "kappa", 0.0);
  try {
    cfg.qubit.validate();
    damped_frequency(cfg.qubit);
  } catch (const Error& e) {
    p.fail(p.section_line("qubit"), "qubit", "", e.what());
  }

  if (p.has_section("plan.sinc")) {
    cfg.plans.push_back(read_plan(p, "plan.sinc", Scheme::Sinc));
  }
  if (p.has_section("plan.interleaved")) {
    cfg.plans.push_back(read_plan(p, "plan.interleaved", Scheme::Interleaved));
  }
  if (cfg.plans.empty()) {
    p.fail(0, "", "", "config needs at least one of [plan.sinc], [plan.interleaved]");
  }

  cfg.base_seed = p.integer("run", "seed", 1);
  cfg.reps = p.integer("run", "reps", 20);
  if (cfg.reps < 1) {
    p.fail(p.find("run", "reps")->line, "run", "reps", "must be at least 1");
  }
  cfg.pipeline.noiseless = p.boolean("run", "noiseless", false);
  if (const Entry* e = p.find("run", "output")) {
    cfg.output_dir = e->value;
  }

  cfg.pipeline.oversample = p.integer("spectrum", "oversample", 16);
  if (cfg.pipeline.oversample < 4) {
    p.fail(p.find("spectrum", "oversample")->line, "spectrum", "oversample", "must be at least 4");
  }
  cfg.pipeline.zero_pad = p.integer("spectrum", "zero_pad", 4);
  if (cfg.pipeline.zero_pad < 1) {
    p.fail(p.find("spectrum", "zero_pad")->line, "spectrum", "zero_pad", "must be at least 1");
  }
  if (const Entry* e = p.find("spectrum", "band")) {
    const auto band = p.number_list("spectrum", "band");
    if (band.size() != 2 || !(band[1] > band[0]) || band[0] < 0.0) {
      p.fail(e->line, "spectrum", "band", "expected 'lo, hi' with 0 <= lo < hi");
    }
    cfg.pipeline.band = std::make_pair(band[0], band[1]);
  }

  SearchGrid& g = cfg.pipeline.grid;
  g.f_step = p.number("fit", "f_step", 0.0);
  g.kappa_min = p.number("fit", "kappa_min", g.kappa_min);
  g.kappa_max = p.number("fit", "kappa_max", g.kappa_max);
  g.kappa_count = p.integer("fit", "kappa_count", g.kappa_count);
  g.amp_min = p.number("fit", "amp_min", g.amp_min);
  g.amp_max = p.number("fit", "amp_max", g.amp_max);
  g.amp_count = p.integer("fit", "amp_count", g.amp_count);
  if (!(g.kappa_min > 0.0) || !(g.kappa_max >= g.kappa_min) || g.kappa_count < 1) {
    p.fail(p.section_line("fit"), "fit", "kappa_min", "need 0 < kappa_min <= kappa_max, count >= 1");
  }
  if (!(g.amp_min > 0.0) || !(g.amp_max >= g.amp_min) || g.amp_count < 1) {
    p.fail(p.section_line("fit"), "fit", "amp_min", "need 0 < amp_min <= amp_max, count >= 1");
  }
  if (const Entry* e = p.find("fit", "shape")) {
    if (e->value == "damped") {
      g.shape = ResonanceShape::DampedOscillation;
    } else if (e->value == "lorentzian") {
      g.shape = ResonanceShape::Lorentzian;
    } else {
      p.fail(e->line, "fit", "shape", "expected damped or lorentzian, got '" + e->value + "'");
    }
  }

  if (p.has_section("sweep")) {
    SweepSpec sweep;
    const Entry* axis = p.find("sweep", "axis");
    if (!axis) {
      p.fail(p.section_line("sweep"), "sweep", "axis", "missing required key");
    }
    if (axis->value == "N") {
      sweep.axis = SweepAxis::N;
    } else if (axis->value == "M") {
      sweep.axis = SweepAxis::M;
    } else {
      p.fail(axis->line, "sweep", "axis", "expected N or M, got '" + axis->value + "'");
    }
    const Entry* values = p.find("sweep", "values");
    if (!values) {
      p.fail(p.section_line("sweep"), "sweep", "values", "missing required key");
    }
    for (auto v : p.integer_list("sweep", "values")) {
      if (v == 0) {
        p.fail(values->line, "sweep", "values", "values must be positive");
      }
      sweep.values.push_back(static_cast<std::size_t>(v));
    }
    if (sweep.values.empty()) {
      p.fail(values->line, "sweep", "values", "list is empty");
    }
    cfg.sweep = std::move(sweep);
  }

  cfg.require_equal_windows = p.boolean("timing", "require_equal_windows", true);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path.string() + ": cannot open config file");
  }
  return parse_config(in, path.string());
}

}  // namespace qis::harness
