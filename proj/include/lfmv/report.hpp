#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace lfmv {

struct LabeledValue {
  std::string label;
  double value = 0.0;
};

struct RatioEntry {
  std::string label;
  std::string observed;  // label of the numerator in `observed`
  std::string bound;     // label of the denominator in `bounds`
  double value = 0.0;
};

/// `asserted == false` marks a diagnostic: recorded, but it never fails a run.
struct Flag {
  std::string name;
  bool passed = true;
  bool asserted = true;
};

struct ExperimentReport {
  std::string experiment;
  std::string form_id;
  std::uint64_t seed = 0;
  std::vector<LabeledValue> parameters;
  std::vector<LabeledValue> observed;
  std::vector<LabeledValue> bounds;
  std::vector<RatioEntry> ratios;
  std::vector<Flag> flags;

  void parameter(std::string label, double v) { parameters.push_back({std::move(label), v}); }
  void observe(std::string label, double v) { observed.push_back({std::move(label), v}); }
  void bound(std::string label, double v) { bounds.push_back({std::move(label), v}); }
  /// Records observed[obs] / bounds[bnd] and returns it.
  double ratio(std::string label, const std::string& obs, const std::string& bnd);
  void flag(std::string name, bool passed, bool asserted = true) {
    flags.push_back({std::move(name), passed, asserted});
  }

  std::optional<double> find_parameter(std::string_view label) const;
  std::optional<double> find_observed(std::string_view label) const;
  std::optional<double> find_bound(std::string_view label) const;
  std::optional<double> find_ratio(std::string_view label) const;
  const Flag* find_flag(std::string_view name) const;

  /// Every asserted flag passed.
  bool passed() const;
  /// Every ratio equals observed / bound within `rel_tol`.
  bool consistent(double rel_tol = 1e-12) const;

  /// "<experiment>__<form>__<k=v>_<k=v>" with filesystem-safe characters.
  std::string file_stem() const;

  bool operator==(const ExperimentReport& other) const;
};

nlohmann::json report_to_json(const ExperimentReport& r);
/// ConfigError on schema violations.
ExperimentReport report_from_json(const nlohmann::json& j);

std::string dump_report(const ExperimentReport& r);
ExperimentReport load_report(const std::filesystem::path& path);

/// One row per ratio: experiment, form, parameters, ratio label, observed, bound, ratio.
std::string reports_to_csv(std::span<const ExperimentReport> reports);

/// Compact number formatting for labels and file names ("1e+04" -> "10000", "0.75").
std::string format_number(double v);

}  // namespace lfmv
