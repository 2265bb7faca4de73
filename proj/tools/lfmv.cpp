// lfmv: command-line front end for coefficient tables, local verification suites
// and the mean-value experiments.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfmv/errors.hpp"
#include "lfmv/estimators.hpp"
#include "lfmv/forms.hpp"
#include "lfmv/hecke.hpp"
#include "lfmv/report.hpp"
#include "lfmv/runner.hpp"

namespace {

using namespace lfmv;

struct Common {
  std::string out = "results";
  int workers = 1;
  std::string profile = "default";
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--workers", c.workers, "parallel experiment jobs")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--tol-profile", c.profile, "tolerance profile")
      ->check(CLI::IsMember({"default", "strict"}))
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "seed for random-unitary forms without one")->capture_default_str();
}

RunConfig base_config(const Common& c, const std::string& experiment, const std::string& form) {
  RunConfig cfg;
  cfg.experiments = {experiment};
  cfg.forms = {form};
  cfg.out = c.out;
  cfg.workers = c.workers;
  cfg.seed = c.seed;
  cfg.tolerance_profile = c.profile;
  cfg.tolerances = tolerance_profile(c.profile);
  return cfg;
}

void print_summary(const std::vector<ExperimentReport>& reports) {
  for (const auto& r : reports) {
    std::string params;
    for (const auto& p : r.parameters) params += " " + p.label + "=" + format_number(p.value);
    std::printf("%s %s %s%s\n", r.passed() ? "PASS" : "FAIL", r.experiment.c_str(), r.form_id.c_str(), params.c_str());
    for (const auto& x : r.ratios) std::printf("    %-44s %.6g\n", x.label.c_str(), x.value);
    for (const auto& f : r.flags) {
      if (!f.passed) std::printf("    %s: %s\n", f.asserted ? "failed" : "note", f.name.c_str());
    }
  }
}

int run_and_report(const RunConfig& cfg) {
  const auto result = run(cfg);
  print_summary(result.reports);
  std::printf("%zu reports written to %s\n", result.reports.size(), cfg.out.string().c_str());
  return result.exit_code();
}

// Lets integer limits be written as 1e6.
const CLI::Validator kIntegerText(
    [](std::string& text) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text, &used);
      } catch (const std::exception&) {
        return std::string("not a number: ") + text;
      }
      if (used != text.size() || !(v >= 0.0) || v > 9.0e15 || v != std::floor(v)) {
        return std::string("not a non-negative integer: ") + text;
      }
      text = std::to_string(static_cast<std::uint64_t>(v));
      return std::string();
    },
    "INT");

std::vector<std::uint64_t> decades_up_to(std::uint64_t P) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 1000; p < P; p *= 10) out.push_back(p);
  out.push_back(P);
  return out;
}

std::vector<int> r_steps_up_to(int R) {
  std::vector<int> out;
  for (int r : {2, 5, 10, 20}) {
    if (r < R) out.push_back(r);
  }
  out.push_back(R);
  return out;
}

int write_coefficients(const std::string& spec, std::uint64_t limit, const std::string& path, const Common& c) {
  const auto tol = tolerance_profile(c.profile);
  const auto form = forms::load_form(spec, c.seed, tol);
  const auto table = hecke::build_coefficient_table(form, limit);
  nlohmann::json A = nlohmann::json::array();
  nlohmann::json L = nlohmann::json::array();
  for (std::uint64_t m = 1; m <= limit; ++m) {
    A.push_back({table.A(m).real(), table.A(m).imag()});
    L.push_back({table.lambda_f(m).real(), table.lambda_f(m).imag()});
  }
  const nlohmann::json doc{{"form", forms::form_to_json(form)},
                           {"form_id", form.id()},
                           {"limit", limit},
                           {"A", A},
                           {"lambda_f", L}};
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << doc.dump() << "\n";
  if (!out) throw ConfigError("write failed for " + path);
  std::printf("wrote A and Lambda_f for m <= %llu to %s\n", static_cast<unsigned long long>(limit), path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hecke coefficients, smoothed log-derivative mean values and their numerical checks"};
  app.require_subcommand(1);
  Common common;

  std::string form = "all-ones:2";
  std::uint64_t limit = 1000;
  std::string path;
  auto* coeffs = app.add_subcommand("coeffs", "write A(m,1,...,1) and Lambda_f(m) for m <= M as JSON");
  coeffs->add_option("--form", form, "builtin form or JSON form file")->required();
  coeffs->add_option("--limit", limit, "largest m")->required()->transform(kIntegerText)->check(CLI::PositiveNumber);
  add_common(coeffs, common);
  coeffs->add_option("--path", path, "output file (default <out>/coeffs__<form>.json)");

  std::string suite = "hecke";
  auto* verify = app.add_subcommand("verify", "local consistency suites at every prime <= limit");
  verify->add_option("--form", form)->required();
  verify->add_option("--suite", suite)->check(CLI::IsMember({"hecke", "satake", "dual"}))->capture_default_str();
  verify->add_option("--limit", limit, "prime limit")->transform(kIntegerText)->capture_default_str();
  add_common(verify, common);

  std::vector<double> sigmas{0.55, 0.75};
  std::vector<double> ygrid{1e2, 1e3, 1e4};
  auto* lemma5 = app.add_subcommand("lemma5", "tail sums beyond (Y/2)(log Y)^2 over a Y grid");
  auto* lemma6 = app.add_subcommand("lemma6", "head sums up to (Y/2)(log Y)^2 against (log Y)^2");
  for (auto* cmd : {lemma5, lemma6}) {
    cmd->add_option("--form", form)->required();
    cmd->add_option("--sigma0", sigmas)->delimiter(',')->capture_default_str();
    cmd->add_option("--ygrid", ygrid)->delimiter(',')->capture_default_str();
    add_common(cmd, common);
  }

  double eps1 = 0.1;
  std::uint64_t plimit = 1'000'000;
  int rmax = 20;
  auto* thm1 = app.add_subcommand("thm1", "prime-power double sums against the closed-form majorant");
  thm1->add_option("--form", form)->required();
  thm1->add_option("--eps1", eps1)->capture_default_str();
  thm1->add_option("--plimit", plimit)->transform(kIntegerText)->capture_default_str();
  thm1->add_option("--rmax", rmax)->capture_default_str();
  add_common(thm1, common);

  auto* rs = app.add_subcommand("rs", "per-r partial sums of |a_f(p^r)|^2 (log p)^2 / p^r");
  rs->add_option("--form", form)->required();
  rs->add_option("--plimit", plimit)->transform(kIntegerText)->capture_default_str();
  rs->add_option("--rmax", rmax, "largest r")->capture_default_str();
  add_common(rs, common);

  std::vector<double> tgrid{1e2, 1e3, 1e4};
  double eta = 0.4;
  auto* thm2 = app.add_subcommand("thm2", "mean square of the smoothed log-derivative proxy over [T, 2T]");
  thm2->add_option("--form", form)->required();
  thm2->add_option("--Tgrid", tgrid)->delimiter(',')->capture_default_str();
  std::vector<double> thm2_sigmas{0.6, 0.75};
  thm2->add_option("--sigma0", thm2_sigmas)->delimiter(',')->capture_default_str();
  thm2->add_option("--eta", eta)->capture_default_str();
  add_common(thm2, common);

  std::size_t samples = 500;
  auto* mvcmd = app.add_subcommand("mv", "off-diagonal mean-square ratios for random Dirichlet polynomials");
  mvcmd->add_option("--samples", samples)->capture_default_str();
  add_common(mvcmd, common);

  int n = 1;
  std::vector<double> Ts{100.0, 500.0};
  double sigma0 = 0.75;
  std::size_t nodes = 0;
  auto* oracle = app.add_subcommand("oracle", "direct |n zeta'/zeta|^2 quadrature against the all-ones proxy");
  oracle->add_option("--n", n)->capture_default_str();
  oracle->add_option("--T", Ts)->delimiter(',')->capture_default_str();
  oracle->add_option("--sigma0", sigma0)->capture_default_str();
  oracle->add_option("--nodes", nodes, "Simpson intervals (0: 40 T)")->transform(kIntegerText)->capture_default_str();
  add_common(oracle, common);

  std::vector<double> tline{0.0, 10.0, 100.0};
  auto* line2 = app.add_subcommand("line2", "|L_f(2+it)| against (zeta(3)/zeta(3/2))^n and zeta(3/2)^n");
  line2->add_option("--form", form)->required();
  line2->add_option("--t", tline)->delimiter(',')->capture_default_str();
  line2->add_option("--plimit", plimit)->transform(kIntegerText)->capture_default_str();
  add_common(line2, common);

  std::string config_path;
  auto* runcmd = app.add_subcommand("run", "run every experiment selected by a JSON config");
  runcmd->add_option("--config", config_path)->required();
  runcmd->add_option("--out", common.out, "override the config's output directory");
  runcmd->add_option("--workers", common.workers, "override the config's worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (coeffs->parsed()) {
      if (path.empty()) {
        std::string stem = form;
        for (auto& ch : stem) {
          if (ch == ':' || ch == '/') ch = '_';
        }
        path = (std::filesystem::path(common.out) / ("coeffs__" + stem + ".json")).string();
      }
      return write_coefficients(form, limit, path, common);
    }
    if (verify->parsed()) {
      const auto tol = tolerance_profile(common.profile);
      const auto f = forms::load_form(form, common.seed, tol);
      const auto report = est::verify_suite(f, est::parse_suite(suite), limit, tol);
      const std::vector<ExperimentReport> reports{report};
      write_reports(common.out, report.file_stem(), reports);
      print_summary(reports);
      return report.passed() ? 0 : 1;
    }
    if (lemma5->parsed() || lemma6->parsed()) {
      auto cfg = base_config(common, lemma5->parsed() ? "lemma5" : "lemma6", form);
      cfg.sigma0 = sigmas;
      cfg.ygrid = ygrid;
      return run_and_report(cfg);
    }
    if (thm1->parsed()) {
      auto cfg = base_config(common, "thm1", form);
      cfg.eps1 = eps1;
      cfg.pgrid = decades_up_to(plimit);
      cfg.rgrid = r_steps_up_to(rmax);
      return run_and_report(cfg);
    }
    if (rs->parsed()) {
      auto cfg = base_config(common, "rs", form);
      cfg.pgrid = decades_up_to(plimit);
      cfg.rs_rmax = rmax;
      return run_and_report(cfg);
    }
    if (thm2->parsed()) {
      auto cfg = base_config(common, "thm2", form);
      cfg.tgrid = tgrid;
      cfg.thm2_sigma0 = thm2_sigmas;
      cfg.eta = eta;
      return run_and_report(cfg);
    }
    if (mvcmd->parsed()) {
      auto cfg = base_config(common, "mv", "all-ones:2");
      cfg.mv_samples = samples;
      return run_and_report(cfg);
    }
    if (oracle->parsed()) {
      auto cfg = base_config(common, "oracle", "all-ones:" + std::to_string(n));
      cfg.oracle_n = n;
      cfg.oracle_T = Ts;
      cfg.oracle_sigma0 = sigma0;
      cfg.oracle_nodes = nodes;
      return run_and_report(cfg);
    }
    if (line2->parsed()) {
      auto cfg = base_config(common, "line2", form);
      cfg.tline = tline;
      cfg.line2_prime_limit = plimit;
      return run_and_report(cfg);
    }
    if (runcmd->parsed()) {
      auto cfg = load_run_config(config_path);
      if (runcmd->count("--out")) cfg.out = common.out;
      if (runcmd->count("--workers")) cfg.workers = common.workers;
      return run_and_report(cfg);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  }
  return 2;
}
