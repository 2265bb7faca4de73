#include "lfmv/forms.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "lfmv/arith.hpp"
#include "lfmv/errors.hpp"
#include "lfmv/kernels.hpp"

namespace lfmv::forms {

using satake::cplx;
using satake::SatakeLocal;
using json = nlohmann::json;

std::string_view source_name(Source s) {
  switch (s) {
    case Source::all_ones:
      return "all-ones";
    case Source::random_unitary:
      return "random-unitary";
    case Source::ramanujan_delta:
      return "ramanujan-delta";
    case Source::explicit_data:
      return "explicit";
  }
  return "unknown";
}

std::vector<__int128> tau_coefficients(std::uint64_t M, bool parallel, const Limits& limits) {
  if (M > limits.tau_cap) {
    throw CapacityError("tau generator limit " + std::to_string(M) + " exceeds cap " +
                        std::to_string(limits.tau_cap));
  }
  std::vector<__int128> out(M + 1, 0);
  if (M == 0) return out;
  // prod (1-q^k)^3 = sum_j (-1)^j (2j+1) q^{j(j+1)/2}  (Jacobi), so Delta/q = that series ^ 8.
  std::vector<kernels::SparseTerm> jacobi;
  for (std::uint64_t j = 0; j * (j + 1) / 2 < M; ++j) {
    jacobi.push_back({j * (j + 1) / 2, (j % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(2 * j + 1)});
  }
  std::vector<__int128> series(M, 0);  // coefficients of q^0 .. q^{M-1}
  for (const auto& t : jacobi) series[t.degree] = t.coeff;
  for (int power = 2; power <= 8; ++power) {
    series = parallel ? kernels::sparse_multiply_omp(series, jacobi) : kernels::sparse_multiply_serial(series, jacobi);
  }
  for (std::uint64_t m = 1; m <= M; ++m) out[m] = series[m - 1];
  return out;
}

namespace {

// Process-wide tau cache, grown on demand. Snapshots are immutable.
std::shared_ptr<const std::vector<__int128>> tau_snapshot(std::uint64_t limit, const Limits& limits) {
  static std::mutex mutex;
  static std::shared_ptr<const std::vector<__int128>> cache;
  std::lock_guard lock(mutex);
  if (!cache || cache->size() <= limit) {
    std::uint64_t target = limit;
    if (cache) target = std::max<std::uint64_t>(limit, std::min<std::uint64_t>(limits.tau_cap, 2 * cache->size()));
    target = std::max<std::uint64_t>(target, 1024);
    target = std::min<std::uint64_t>(target, limits.tau_cap);
    if (target < limit) {
      throw CapacityError("tau generator limit " + std::to_string(limit) + " exceeds cap " +
                          std::to_string(limits.tau_cap));
    }
    cache = std::make_shared<const std::vector<__int128>>(tau_coefficients(target, true, limits));
  }
  return cache;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0,1) from the top 53 bits; independent of the standard library's distributions.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool all_unit_modulus(const SatakeLocal& s, double tol) {
  for (auto a : s.alphas) {
    if (std::abs(std::abs(a) - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace

FormSpec FormSpec::all_ones(int degree) {
  if (degree < 1) throw DomainError("all-ones form needs degree >= 1");
  FormSpec f;
  f.name_ = "all-ones:" + std::to_string(degree);
  f.degree_ = degree;
  f.source_ = Source::all_ones;
  return f;
}

FormSpec FormSpec::random_unitary(int degree, std::uint64_t seed) {
  if (degree < 2) throw DomainError("random-unitary form needs degree >= 2");
  FormSpec f;
  f.name_ = "random-unitary:" + std::to_string(degree) + ":" + std::to_string(seed);
  f.degree_ = degree;
  f.source_ = Source::random_unitary;
  f.seed_ = seed;
  return f;
}

FormSpec FormSpec::ramanujan_delta() {
  FormSpec f;
  f.name_ = "delta";
  f.degree_ = 2;
  f.source_ = Source::ramanujan_delta;
  return f;
}

FormSpec FormSpec::from_local_data(std::string name, int degree, std::vector<SatakeLocal> locals,
                                   const Tolerances& tol) {
  if (degree < 2) throw ConfigError("form '" + name + "': degree must be >= 2");
  auto data = std::make_shared<std::map<std::uint64_t, SatakeLocal>>();
  bool unitary = true;
  for (auto& s : locals) {
    if (s.degree() != degree) {
      throw IngestionError("form '" + name + "': expected " + std::to_string(degree) + " roots at p=" +
                               std::to_string(s.p) + ", got " + std::to_string(s.degree()),
                           s.p);
    }
    if (!arith::is_prime(s.p)) {
      throw IngestionError("form '" + name + "': " + std::to_string(s.p) + " is not prime", s.p);
    }
    satake::validate(s, true, tol);
    unitary = unitary && all_unit_modulus(s, tol.invariant);
    if (!data->emplace(s.p, s).second) {
      throw IngestionError("form '" + name + "': duplicate entry for p=" + std::to_string(s.p), s.p);
    }
  }
  FormSpec f;
  f.name_ = std::move(name);
  f.degree_ = degree;
  f.source_ = Source::explicit_data;
  f.unitary_ = unitary;
  f.explicit_ = std::move(data);
  return f;
}

const std::map<std::uint64_t, SatakeLocal>& FormSpec::explicit_data() const {
  static const std::map<std::uint64_t, SatakeLocal> empty;
  return explicit_ ? *explicit_ : empty;
}

std::string FormSpec::id() const { return name_; }

std::uint64_t FormSpec::data_limit(const Limits& limits) const {
  switch (source_) {
    case Source::all_ones:
    case Source::random_unitary:
      return limits.sieve_cap;
    case Source::ramanujan_delta:
      return limits.tau_cap;
    case Source::explicit_data: {
      // Tables can be built for every m below the first prime without data.
      std::uint64_t last = 1;
      for (const auto& [p, s] : *explicit_) {
        (void)s;
        for (std::uint64_t q = last + 1; q < p; ++q) {
          if (arith::is_prime(q)) return q - 1;
        }
        last = p;
      }
      std::uint64_t q = last + 1;
      while (!arith::is_prime(q)) ++q;
      return q - 1;
    }
  }
  return 0;
}

void FormSpec::prepare(std::uint64_t prime_limit) const {
  if (source_ == Source::ramanujan_delta) (void)tau_snapshot(prime_limit, Limits{});
}

SatakeLocal FormSpec::local(std::uint64_t p) const {
  switch (source_) {
    case Source::all_ones:
      return {p, std::vector<cplx>(static_cast<std::size_t>(degree_), cplx{1.0, 0.0})};
    case Source::random_unitary: {
      std::mt19937_64 rng(splitmix64(seed_ ^ splitmix64(p)));
      SatakeLocal s{p, {}};
      for (int j = 0; j < degree_ / 2; ++j) {
        const double theta = std::numbers::pi * unit_uniform(rng);
        s.alphas.push_back(std::polar(1.0, theta));
        s.alphas.push_back(std::polar(1.0, -theta));
      }
      if (degree_ % 2 == 1) s.alphas.emplace_back(1.0, 0.0);
      return s;
    }
    case Source::ramanujan_delta: {
      if (p > Limits{}.tau_cap) {
        throw IngestionError("Delta local data unavailable at p=" + std::to_string(p) + " (tau cap)", p);
      }
      const auto tau = tau_snapshot(p, Limits{});
      const long double a =
          static_cast<long double>((*tau)[p]) / std::pow(static_cast<long double>(p), 5.5L);
      return satake::alphas_from_hecke({p, {cplx{static_cast<double>(a), 0.0}}});
    }
    case Source::explicit_data: {
      const auto it = explicit_->find(p);
      if (it == explicit_->end()) {
        throw IngestionError("form '" + name_ + "' has no local data at p=" + std::to_string(p), p);
      }
      return it->second;
    }
  }
  throw IngestionError("unknown form source", p);
}

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError("form document: missing field '" + path + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("form document: field '" + path + key + "' has the wrong type");
  }
}

}  // namespace

FormSpec parse_form(const json& doc, const Tolerances& tol) {
  const auto name = field<std::string>(doc, "name", "");
  const int degree = field<int>(doc, "degree", "");
  if (!field<bool>(doc, "self_dual", "")) throw ConfigError("form '" + name + "': only self-dual forms are supported");
  if (degree < 2) throw ConfigError("form '" + name + "': field 'degree' must be >= 2");
  if (!doc.contains("source") || !doc.at("source").is_object()) {
    throw ConfigError("form document: missing object field 'source'");
  }
  const auto& src = doc.at("source");
  const auto type = field<std::string>(src, "type", "source.");
  if (type == "all-ones") return FormSpec::all_ones(degree);
  if (type == "random-unitary") return FormSpec::random_unitary(degree, field<std::uint64_t>(src, "seed", "source."));
  if (type == "ramanujan-delta") {
    if (degree != 2) throw ConfigError("form '" + name + "': ramanujan-delta has degree 2");
    return FormSpec::ramanujan_delta();
  }
  if (type != "explicit") throw ConfigError("form document: unknown source.type '" + type + "'");
  if (!src.contains("primes") || !src.at("primes").is_array()) {
    throw ConfigError("form document: missing array field 'source.primes'");
  }
  std::vector<SatakeLocal> locals;
  std::size_t index = 0;
  for (const auto& entry : src.at("primes")) {
    const std::string path = "source.primes[" + std::to_string(index++) + "].";
    SatakeLocal s{field<std::uint64_t>(entry, "p", path), {}};
    if (!entry.contains("alphas") || !entry.at("alphas").is_array()) {
      throw ConfigError("form document: missing array field '" + path + "alphas'");
    }
    for (const auto& pair : entry.at("alphas")) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
        throw ConfigError("form document: '" + path + "alphas' entries must be [re, im]");
      }
      s.alphas.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    locals.push_back(std::move(s));
  }
  return FormSpec::from_local_data(name, degree, std::move(locals), tol);
}

json form_to_json(const FormSpec& form, std::uint64_t materialise_to) {
  json doc{{"name", form.name()}, {"degree", form.degree()}, {"self_dual", true}};
  if (form.source() != Source::explicit_data && materialise_to == 0) {
    json src{{"type", std::string(source_name(form.source()))}};
    if (form.source() == Source::random_unitary) src["seed"] = form.seed();
    doc["source"] = src;
    return doc;
  }
  json primes = json::array();
  auto emit = [&](const SatakeLocal& s) {
    json alphas = json::array();
    for (auto a : s.alphas) alphas.push_back({a.real(), a.imag()});
    primes.push_back({{"p", s.p}, {"alphas", alphas}});
  };
  if (materialise_to == 0) {
    for (const auto& [p, s] : form.explicit_data()) emit(s);
  } else {
    form.prepare(materialise_to);
    for (std::uint64_t p = 2; p <= materialise_to; ++p) {
      if (arith::is_prime(p)) emit(form.local(p));
    }
  }
  doc["source"] = {{"type", "explicit"}, {"primes", primes}};
  return doc;
}

FormSpec load_form(std::string_view spec, std::uint64_t default_seed, const Tolerances& tol) {
  if (spec == "delta" || spec == "ramanujan-delta" || spec == "delta:2") return FormSpec::ramanujan_delta();
  const auto parts = split(spec, ':');
  if (parts.size() >= 2 && (parts[0] == "all-ones" || parts[0] == "random-unitary")) {
    const int degree = parse_int(parts[1], "degree");
    if (degree < 2) throw ConfigError("builtin form '" + std::string(spec) + "': degree must be >= 2");
    if (parts[0] == "all-ones") {
      if (parts.size() != 2) throw ConfigError("builtin form '" + std::string(spec) + "' takes no seed");
      return FormSpec::all_ones(degree);
    }
    if (parts.size() > 3) throw ConfigError("malformed builtin form '" + std::string(spec) + "'");
    const std::uint64_t seed = parts.size() == 3 ? parse_u64(parts[2], "seed") : default_seed;
    return FormSpec::random_unitary(degree, seed);
  }
  std::ifstream in{std::string(spec)};
  if (!in) throw ConfigError("cannot open form file '" + std::string(spec) + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("form file '" + std::string(spec) + "': " + e.what());
  }
  return parse_form(doc, tol);
}

}  // namespace lfmv::forms
