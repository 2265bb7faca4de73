#include "lfmv/runner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <set>

#include "lfmv/errors.hpp"
#include "lfmv/forms.hpp"
#include "lfmv/hecke.hpp"

namespace lfmv {

namespace {

using nlohmann::json;

template <typename T>
void read(const json& doc, const char* key, T& into) {
  if (!doc.contains(key)) return;
  try {
    into = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config field '") + key + "': " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed for " + path.string());
}

struct Job {
  std::string experiment;
  std::string form;
  std::string stem;
  std::function<std::vector<ExperimentReport>()> body;
};

std::string safe_stem(std::string s) {
  for (auto& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.' && c != '=') c = '_';
  }
  return s;
}

std::vector<Job> plan(const RunConfig& cfg) {
  std::vector<Job> jobs;
  const auto& tol = cfg.tolerances;
  auto form_of = [&cfg, tol](const std::string& spec) { return forms::load_form(spec, cfg.seed, tol); };
  for (const auto& exp : cfg.experiments) {
    if (exp == "mv") {
      jobs.push_back({exp, "none", "mv", [&cfg] {
                        return std::vector<ExperimentReport>{
                            est::mv_experiment(cfg.mv_samples, cfg.seed, cfg.mv_T, cfg.policy)};
                      }});
      continue;
    }
    if (exp == "oracle") {
      for (double T : cfg.oracle_T) {
        const std::string stem = "oracle__n=" + std::to_string(cfg.oracle_n) + "_T=" + format_number(T);
        jobs.push_back({exp, "all-ones:" + std::to_string(cfg.oracle_n), stem, [&cfg, T] {
                          std::size_t nodes = cfg.oracle_nodes;
                          if (nodes == 0) nodes = 2 * static_cast<std::size_t>(std::ceil(20.0 * T));
                          return std::vector<ExperimentReport>{est::zeta_oracle_crosscheck(
                              cfg.oracle_n, T, cfg.oracle_sigma0, nodes, cfg.eta, cfg.policy)};
                        }});
      }
      continue;
    }
    for (const auto& spec : cfg.forms) {
      const std::string base = exp + "__" + spec;
      if (exp == "lemma5" || exp == "lemma6") {
        for (double s : cfg.sigma0) {
          jobs.push_back({exp, spec, safe_stem(base + "__sigma0=" + format_number(s)), [&cfg, spec, s, exp, form_of] {
                            const auto form = form_of(spec);
                            const auto limit = cfg.table_limit.value_or(est::table_limit_for(cfg.ygrid));
                            const auto table = hecke::build_coefficient_table(form, limit, true, cfg.limits);
                            auto out = exp == "lemma5" ? est::lemma5_grid(table, s, cfg.ygrid, cfg.policy)
                                                       : est::lemma6_grid(table, s, cfg.ygrid, cfg.policy);
                            for (auto& r : out) r.seed = form.seed();
                            return out;
                          }});
        }
      } else if (exp == "thm2") {
        for (double s : cfg.thm2_sigma0) {
          jobs.push_back({exp, spec, safe_stem(base + "__sigma0=" + format_number(s)), [&cfg, spec, s, form_of] {
                            const auto form = form_of(spec);
                            const auto limit =
                                cfg.table_limit.value_or(est::theorem2_table_limit(cfg.tgrid, cfg.eta, cfg.policy));
                            const auto table = hecke::build_coefficient_table(form, limit, true, cfg.limits);
                            return est::theorem2_grid(table, cfg.tgrid, s, cfg.eta, cfg.policy, true, form.seed());
                          }});
        }
      } else if (exp == "thm1") {
        jobs.push_back({exp, spec, safe_stem(base), [&cfg, spec, form_of] {
                          return est::theorem1_grid(form_of(spec), cfg.eps1, cfg.pgrid, cfg.rgrid);
                        }});
      } else if (exp == "rs") {
        jobs.push_back({exp, spec, safe_stem(base), [&cfg, spec, form_of] {
                          return est::rudnick_sarnak_partial(form_of(spec), cfg.pgrid, cfg.rs_rmax);
                        }});
      } else if (exp == "line2") {
        jobs.push_back({exp, spec, safe_stem(base), [&cfg, spec, form_of] {
                          const auto form = form_of(spec);
                          std::vector<ExperimentReport> out;
                          for (double t : cfg.tline) out.push_back(est::line2_sandwich(form, t, cfg.line2_prime_limit));
                          return out;
                        }});
      }
    }
  }
  return jobs;
}

}  // namespace

void RunConfig::validate() const {
  if (experiments.empty()) throw ConfigError("run config selects no experiments");
  for (const auto& e : experiments) {
    const auto& known = known_experiments();
    if (std::find(known.begin(), known.end(), e) == known.end()) throw ConfigError("unknown experiment '" + e + "'");
  }
  if (forms.empty()) throw ConfigError("run config lists no forms");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (table_limit && *table_limit > limits.table_cap) {
    throw ConfigError("table_limit " + std::to_string(*table_limit) + " exceeds the cap " +
                      std::to_string(limits.table_cap));
  }
  for (auto P : pgrid) {
    if (P > limits.sieve_cap) throw ConfigError("prime limit " + std::to_string(P) + " exceeds the sieve cap");
  }
  if (line2_prime_limit > limits.sieve_cap) throw ConfigError("line2 prime limit exceeds the sieve cap");
  auto non_empty = [](const auto& v, const char* name) {
    if (v.empty()) throw ConfigError(std::string("grid '") + name + "' is empty");
  };
  non_empty(sigma0, "sigma0");
  non_empty(ygrid, "ygrid");
  non_empty(thm2_sigma0, "thm2_sigma0");
  non_empty(tgrid, "tgrid");
  non_empty(pgrid, "pgrid");
  non_empty(rgrid, "rgrid");
  non_empty(tline, "tline");
  non_empty(oracle_T, "oracle_T");
  non_empty(mv_T, "mv_T");
}

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("run config must be a JSON object");
  static const std::set<std::string> keys{
      "forms",       "experiments", "seed",   "tolerance_profile", "workers", "out",          "table_limit",
      "sigma0",      "ygrid",       "thm2_sigma0", "tgrid",        "eta",     "eps1",         "pgrid",
      "rgrid",       "rs_rmax",     "tline",  "line2_prime_limit", "oracle_n", "oracle_T",    "oracle_sigma0",
      "oracle_nodes", "mv_samples", "mv_T",   "limits"};
  for (const auto& [k, v] : doc.items()) {
    if (!keys.count(k)) throw ConfigError("run config: unknown key '" + k + "'");
  }
  RunConfig cfg;
  read(doc, "forms", cfg.forms);
  read(doc, "experiments", cfg.experiments);
  read(doc, "seed", cfg.seed);
  read(doc, "tolerance_profile", cfg.tolerance_profile);
  cfg.tolerances = tolerance_profile(cfg.tolerance_profile);
  read(doc, "workers", cfg.workers);
  std::string out = cfg.out.string();
  read(doc, "out", out);
  cfg.out = out;
  if (doc.contains("table_limit") && !doc.at("table_limit").is_null()) {
    std::uint64_t v = 0;
    read(doc, "table_limit", v);
    cfg.table_limit = v;
  }
  read(doc, "sigma0", cfg.sigma0);
  read(doc, "ygrid", cfg.ygrid);
  read(doc, "thm2_sigma0", cfg.thm2_sigma0);
  read(doc, "tgrid", cfg.tgrid);
  read(doc, "eta", cfg.eta);
  read(doc, "eps1", cfg.eps1);
  read(doc, "pgrid", cfg.pgrid);
  read(doc, "rgrid", cfg.rgrid);
  read(doc, "rs_rmax", cfg.rs_rmax);
  read(doc, "tline", cfg.tline);
  read(doc, "line2_prime_limit", cfg.line2_prime_limit);
  read(doc, "oracle_n", cfg.oracle_n);
  read(doc, "oracle_T", cfg.oracle_T);
  read(doc, "oracle_sigma0", cfg.oracle_sigma0);
  read(doc, "oracle_nodes", cfg.oracle_nodes);
  read(doc, "mv_samples", cfg.mv_samples);
  read(doc, "mv_T", cfg.mv_T);
  if (doc.contains("limits")) {
    const auto& l = doc.at("limits");
    if (!l.is_object()) throw ConfigError("run config field 'limits' must be an object");
    read(l, "sieve_cap", cfg.limits.sieve_cap);
    read(l, "table_cap", cfg.limits.table_cap);
    read(l, "tau_cap", cfg.limits.tau_cap);
    read(l, "mean_square_terms_cap", cfg.limits.mean_square_terms_cap);
    read(l, "root_iterations", cfg.limits.root_iterations);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open run config " + path.string());
  try {
    return parse_run_config(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json run_config_to_json(const RunConfig& cfg) {
  json j{{"forms", cfg.forms},
         {"experiments", cfg.experiments},
         {"seed", cfg.seed},
         {"tolerance_profile", cfg.tolerance_profile},
         {"workers", cfg.workers},
         {"out", cfg.out.string()},
         {"sigma0", cfg.sigma0},
         {"ygrid", cfg.ygrid},
         {"thm2_sigma0", cfg.thm2_sigma0},
         {"tgrid", cfg.tgrid},
         {"eta", cfg.eta},
         {"eps1", cfg.eps1},
         {"pgrid", cfg.pgrid},
         {"rgrid", cfg.rgrid},
         {"rs_rmax", cfg.rs_rmax},
         {"tline", cfg.tline},
         {"line2_prime_limit", cfg.line2_prime_limit},
         {"oracle_n", cfg.oracle_n},
         {"oracle_T", cfg.oracle_T},
         {"oracle_sigma0", cfg.oracle_sigma0},
         {"oracle_nodes", cfg.oracle_nodes},
         {"mv_samples", cfg.mv_samples},
         {"mv_T", cfg.mv_T},
         {"limits",
          {{"sieve_cap", cfg.limits.sieve_cap},
           {"table_cap", cfg.limits.table_cap},
           {"tau_cap", cfg.limits.tau_cap},
           {"mean_square_terms_cap", cfg.limits.mean_square_terms_cap},
           {"root_iterations", cfg.limits.root_iterations}}}};
  j["table_limit"] = cfg.table_limit ? json(*cfg.table_limit) : json(nullptr);
  return j;
}

std::vector<std::filesystem::path> write_reports(const std::filesystem::path& dir, const std::string& csv_stem,
                                                 std::span<const ExperimentReport> reports) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> files;
  for (const auto& r : reports) {
    auto path = dir / (r.file_stem() + ".json");
    write_file(path, dump_report(r));
    files.push_back(std::move(path));
  }
  if (!reports.empty()) {
    auto path = dir / (csv_stem + ".csv");
    write_file(path, reports_to_csv(reports));
    files.push_back(std::move(path));
  }
  return files;
}

RunResult run(const RunConfig& cfg) {
  cfg.validate();
  const auto jobs = plan(cfg);
  std::vector<std::vector<ExperimentReport>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.workers)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      results[k] = jobs[k].body();
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }

  RunResult out;
  json manifest_jobs = json::array();
  std::exception_ptr first_error;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    json entry{{"experiment", jobs[k].experiment}, {"form", jobs[k].form}};
    if (errors[k]) {
      out.complete = false;
      if (!first_error) first_error = errors[k];
      entry["status"] = "error";
      try {
        std::rethrow_exception(errors[k]);
      } catch (const std::exception& e) {
        entry["error"] = e.what();
        entry["exit_code"] = exit_code_for(e);
      } catch (...) {
        entry["error"] = "unknown error";
        entry["exit_code"] = 3;
      }
    } else {
      const auto files = write_reports(cfg.out, jobs[k].stem, results[k]);
      json names = json::array();
      for (const auto& f : files) names.push_back(f.filename().string());
      bool passed = true;
      for (const auto& r : results[k]) passed = passed && r.passed();
      entry["status"] = "ok";
      entry["passed"] = passed;
      entry["files"] = names;
      out.passed = out.passed && passed;
      out.files.insert(out.files.end(), files.begin(), files.end());
      for (auto& r : results[k]) out.reports.push_back(std::move(r));
    }
    manifest_jobs.push_back(std::move(entry));
  }
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.out.string() + ": " + ec.message());
  // Output location and worker count do not affect results, so they stay out of the manifest.
  json echoed = run_config_to_json(cfg);
  echoed.erase("out");
  echoed.erase("workers");
  const json manifest{{"complete", out.complete},
                      {"passed", out.complete && out.passed},
                      {"jobs", manifest_jobs},
                      {"config", echoed}};
  const auto manifest_path = cfg.out / "manifest.json";
  write_file(manifest_path, manifest.dump(2) + "\n");
  out.files.push_back(manifest_path);
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace lfmv
