#include "lfmv/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lfmv/errors.hpp"

namespace lfmv {

namespace {

using nlohmann::json;

std::optional<double> lookup(const std::vector<LabeledValue>& values, std::string_view label) {
  for (const auto& v : values) {
    if (v.label == label) return v.value;
  }
  return std::nullopt;
}

// NaN == NaN here: reports are compared as serialized records.
bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same(const std::vector<LabeledValue>& a, const std::vector<LabeledValue>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].label != b[i].label || !same(a[i].value, b[i].value)) return false;
  }
  return true;
}

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
  }
  throw ConfigError("report field '" + where + "' is not a number");
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("report is missing '" + where + key + "'");
  return j.at(key);
}

json labeled_to_json(const std::vector<LabeledValue>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back({{"label", v.label}, {"value", number_to_json(v.value)}});
  return out;
}

std::vector<LabeledValue> labeled_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError("report field '" + where + "' must be an array");
  std::vector<LabeledValue> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "].";
    out.push_back({require(j[i], "label", at).get<std::string>(), number_from_json(require(j[i], "value", at), at + "value")});
  }
  return out;
}

std::string safe(std::string s) {
  for (auto& c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '-' || c == '=';
    if (!ok) c = '_';
  }
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double ExperimentReport::ratio(std::string label, const std::string& obs, const std::string& bnd) {
  const auto o = find_observed(obs);
  const auto b = find_bound(bnd);
  if (!o || !b) throw DomainError("ratio '" + label + "' refers to an unknown observed/bound label");
  const double v = *o / *b;
  ratios.push_back({std::move(label), obs, bnd, v});
  return v;
}

std::optional<double> ExperimentReport::find_parameter(std::string_view label) const { return lookup(parameters, label); }
std::optional<double> ExperimentReport::find_observed(std::string_view label) const { return lookup(observed, label); }
std::optional<double> ExperimentReport::find_bound(std::string_view label) const { return lookup(bounds, label); }

std::optional<double> ExperimentReport::find_ratio(std::string_view label) const {
  for (const auto& r : ratios) {
    if (r.label == label) return r.value;
  }
  return std::nullopt;
}

const Flag* ExperimentReport::find_flag(std::string_view name) const {
  for (const auto& f : flags) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

bool ExperimentReport::passed() const {
  return std::all_of(flags.begin(), flags.end(), [](const Flag& f) { return f.passed || !f.asserted; });
}

bool ExperimentReport::consistent(double rel_tol) const {
  for (const auto& r : ratios) {
    const auto o = find_observed(r.observed);
    const auto b = find_bound(r.bound);
    if (!o || !b) return false;
    const double expect = *o / *b;
    if (same(expect, r.value)) continue;
    if (!(std::abs(expect - r.value) <= rel_tol * std::max(1.0, std::abs(expect)))) return false;
  }
  return true;
}

std::string ExperimentReport::file_stem() const {
  std::string stem = safe(experiment) + "__" + safe(form_id);
  std::string params;
  for (const auto& p : parameters) {
    if (!params.empty()) params += '_';
    params += safe(p.label) + "=" + safe(format_number(p.value));
  }
  if (!params.empty()) stem += "__" + params;
  return stem;
}

bool ExperimentReport::operator==(const ExperimentReport& o) const {
  if (experiment != o.experiment || form_id != o.form_id || seed != o.seed) return false;
  if (!same(parameters, o.parameters) || !same(observed, o.observed) || !same(bounds, o.bounds)) return false;
  if (ratios.size() != o.ratios.size() || flags.size() != o.flags.size()) return false;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const auto& a = ratios[i];
    const auto& b = o.ratios[i];
    if (a.label != b.label || a.observed != b.observed || a.bound != b.bound || !same(a.value, b.value)) return false;
  }
  for (std::size_t i = 0; i < flags.size(); ++i) {
    const auto& a = flags[i];
    const auto& b = o.flags[i];
    if (a.name != b.name || a.passed != b.passed || a.asserted != b.asserted) return false;
  }
  return true;
}

json report_to_json(const ExperimentReport& r) {
  json ratios = json::array();
  for (const auto& x : r.ratios) {
    ratios.push_back({{"label", x.label}, {"observed", x.observed}, {"bound", x.bound}, {"value", number_to_json(x.value)}});
  }
  json flags = json::array();
  for (const auto& f : r.flags) flags.push_back({{"name", f.name}, {"passed", f.passed}, {"asserted", f.asserted}});
  return json{{"experiment", r.experiment},
              {"form_id", r.form_id},
              {"seed", r.seed},
              {"parameters", labeled_to_json(r.parameters)},
              {"observed", labeled_to_json(r.observed)},
              {"bounds", labeled_to_json(r.bounds)},
              {"ratios", ratios},
              {"flags", flags},
              {"passed", r.passed()}};
}

ExperimentReport report_from_json(const json& j) {
  try {
    ExperimentReport r;
    r.experiment = require(j, "experiment", "").get<std::string>();
    r.form_id = require(j, "form_id", "").get<std::string>();
    r.seed = require(j, "seed", "").get<std::uint64_t>();
    r.parameters = labeled_from_json(require(j, "parameters", ""), "parameters");
    r.observed = labeled_from_json(require(j, "observed", ""), "observed");
    r.bounds = labeled_from_json(require(j, "bounds", ""), "bounds");
    const auto& ratios = require(j, "ratios", "");
    if (!ratios.is_array()) throw ConfigError("report field 'ratios' must be an array");
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      const std::string at = "ratios[" + std::to_string(i) + "].";
      r.ratios.push_back({require(ratios[i], "label", at).get<std::string>(),
                          require(ratios[i], "observed", at).get<std::string>(),
                          require(ratios[i], "bound", at).get<std::string>(),
                          number_from_json(require(ratios[i], "value", at), at + "value")});
    }
    const auto& flags = require(j, "flags", "");
    if (!flags.is_array()) throw ConfigError("report field 'flags' must be an array");
    for (std::size_t i = 0; i < flags.size(); ++i) {
      const std::string at = "flags[" + std::to_string(i) + "].";
      r.flags.push_back({require(flags[i], "name", at).get<std::string>(),
                         require(flags[i], "passed", at).get<bool>(),
                         require(flags[i], "asserted", at).get<bool>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

std::string dump_report(const ExperimentReport& r) { return report_to_json(r).dump(2) + "\n"; }

ExperimentReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report " + path.string());
  try {
    return report_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string reports_to_csv(std::span<const ExperimentReport> reports) {
  std::ostringstream out;
  out << "experiment,form,parameter_point,ratio,observed_label,observed,bound_label,bound,value\n";
  for (const auto& r : reports) {
    std::string point;
    for (const auto& p : r.parameters) {
      if (!point.empty()) point += ';';
      point += p.label + "=" + format_number(p.value);
    }
    for (const auto& x : r.ratios) {
      out << csv_field(r.experiment) << ',' << csv_field(r.form_id) << ',' << csv_field(point) << ','
          << csv_field(x.label) << ',' << csv_field(x.observed) << ','
          << csv_number(r.find_observed(x.observed).value_or(std::nan(""))) << ',' << csv_field(x.bound) << ','
          << csv_number(r.find_bound(x.bound).value_or(std::nan(""))) << ',' << csv_number(x.value) << '\n';
    }
  }
  return out.str();
}

std::string format_number(double v) {
  char buf[40];
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.10g", v);
  }
  return buf;
}

}  // namespace lfmv
