#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfmv/config.hpp"
#include "lfmv/estimators.hpp"
#include "lfmv/report.hpp"

namespace lfmv {

struct RunConfig {
  std::vector<std::string> forms{"all-ones:2"};
  std::vector<std::string> experiments{"lemma5"};
  std::uint64_t seed = 1;
  std::string tolerance_profile = "default";
  Tolerances tolerances = Tolerances::defaults();
  Limits limits{};
  int workers = 1;
  std::filesystem::path out = "results";
  /// Coefficient-table size for lemma5/lemma6/thm2; derived from the grids when unset.
  std::optional<std::uint64_t> table_limit;

  std::vector<double> sigma0{0.55, 0.75};           // lemma5 / lemma6
  std::vector<double> ygrid{1e2, 1e3, 1e4};
  std::vector<double> thm2_sigma0{0.6, 0.75};
  std::vector<double> tgrid{1e2, 1e3, 1e4};
  double eta = 0.4;
  double eps1 = 0.1;
  std::vector<std::uint64_t> pgrid{1'000, 10'000, 100'000, 1'000'000};
  std::vector<int> rgrid{2, 5, 10, 20};
  int rs_rmax = 3;
  std::vector<double> tline{0.0, 10.0, 100.0};
  std::uint64_t line2_prime_limit = 100'000;
  int oracle_n = 1;
  std::vector<double> oracle_T{100.0, 500.0};
  double oracle_sigma0 = 0.75;
  std::size_t oracle_nodes = 0;  // 0: 40 T rounded up to even
  std::size_t mv_samples = 500;
  std::vector<double> mv_T{10.0, 100.0, 1000.0};
  est::Policy policy{};

  /// ConfigError on unknown experiments, empty grids or limits beyond their caps.
  void validate() const;
};

inline const std::vector<std::string>& known_experiments() {
  static const std::vector<std::string> names{"lemma5", "lemma6", "thm1", "rs", "thm2", "oracle", "line2", "mv"};
  return names;
}

/// Unknown keys are rejected with the offending key in the message.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json run_config_to_json(const RunConfig& cfg);

struct RunResult {
  std::vector<ExperimentReport> reports;
  std::vector<std::filesystem::path> files;
  bool complete = true;
  bool passed = true;
  int exit_code() const noexcept { return passed ? 0 : 1; }
};

/// Runs every selected experiment over every form, jobs spread over `workers` threads,
/// then writes reports, per-job CSV files and manifest.json in job order.
/// If a job throws, the other jobs' results are still written, the manifest is marked
/// incomplete, and the first failing job's exception is rethrown.
RunResult run(const RunConfig& cfg);

/// Writes reports (JSON per report plus one CSV) into `dir`; returns the written paths.
std::vector<std::filesystem::path> write_reports(const std::filesystem::path& dir, const std::string& csv_stem,
                                                 std::span<const ExperimentReport> reports);

}  // namespace lfmv
