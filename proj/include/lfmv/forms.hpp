#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lfmv/config.hpp"
#include "lfmv/satake.hpp"

namespace lfmv::forms {

enum class Source { all_ones, random_unitary, ramanujan_delta, explicit_data };

std::string_view source_name(Source s);

/// A self-dual degree-n form, described by where its local Satake data comes from.
class FormSpec {
 public:
  /// Every local factor is {1,...,1}: L_f = zeta^n. Degree 1 is allowed here (zeta itself).
  static FormSpec all_ones(int degree);
  /// Per prime, conjugate pairs e^{+-i theta} (plus 1 when n is odd), theta drawn from (seed, p).
  static FormSpec random_unitary(int degree, std::uint64_t seed);
  /// Ramanujan Delta, unitarily normalised: X^2 - tau(p) p^{-11/2} X + 1.
  static FormSpec ramanujan_delta();
  /// Explicit local data; every factor is validated against the SatakeLocal invariants.
  static FormSpec from_local_data(std::string name, int degree, std::vector<satake::SatakeLocal> locals,
                                  const Tolerances& tol = {});

  const std::string& name() const noexcept { return name_; }
  int degree() const noexcept { return degree_; }
  bool self_dual() const noexcept { return true; }
  Source source() const noexcept { return source_; }
  std::uint64_t seed() const noexcept { return seed_; }
  /// Builtin syntax ("all-ones:3", "random-unitary:4:7", "delta") or the explicit form's name.
  std::string id() const;

  /// True when every local root has modulus 1 (all builtins; explicit data checked at load).
  bool unitary() const noexcept { return unitary_; }

  /// Largest M such that local data exists at every prime <= M.
  std::uint64_t data_limit(const Limits& limits = {}) const;

  /// Precomputes whatever local() needs for primes <= prime_limit (the tau table for Delta).
  void prepare(std::uint64_t prime_limit) const;

  /// Local data at prime p; IngestionError naming p when unavailable.
  satake::SatakeLocal local(std::uint64_t p) const;

  /// Listed local data of an explicit form (empty for builtins).
  const std::map<std::uint64_t, satake::SatakeLocal>& explicit_data() const;

 private:
  FormSpec() = default;

  std::string name_;
  int degree_ = 0;
  Source source_ = Source::all_ones;
  std::uint64_t seed_ = 0;
  bool unitary_ = true;
  std::shared_ptr<const std::map<std::uint64_t, satake::SatakeLocal>> explicit_;
};

/// Builtin name ("source:degree[:seed]", "delta") or a path to a JSON form file.
FormSpec load_form(std::string_view spec, std::uint64_t default_seed = 1, const Tolerances& tol = {});

/// Form document -> FormSpec. Throws ConfigError (schema) or IngestionError (invariants).
FormSpec parse_form(const nlohmann::json& doc, const Tolerances& tol = {});

/// FormSpec -> form document. Explicit sources list their primes; builtins are written
/// as their source record unless `materialise_to` > 0, which dumps local data up to that prime.
nlohmann::json form_to_json(const FormSpec& form, std::uint64_t materialise_to = 0);

/// tau(0..M) (tau(0) = 0) from Delta = q prod (1 - q^k)^24, exact 128-bit arithmetic.
std::vector<__int128> tau_coefficients(std::uint64_t M, bool parallel = true, const Limits& limits = {});

}  // namespace lfmv::forms
