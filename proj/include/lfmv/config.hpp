#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace lfmv {

/// Every numeric tolerance used by invariant checks and verification suites.
/// Modules take a `Tolerances` by const reference; nothing hard-codes its own.
struct Tolerances {
  double invariant = 1e-10;          // SatakeLocal / Hecke vector invariants
  double root_residual = 1e-9;       // |poly(alpha)| / (1 + max|coeff|)
  double newton_crosscheck = 1e-9;   // power sums: direct vs Newton identities
  double round_trip = 1e-8;          // hecke <-> alphas multiset agreement
  double multiplicativity = 1e-9;    // |A(mm') - A(m)A(m')|
  double imaginary_part = 1e-9;      // self-dual tables are real
  double hecke_relation = 1e-8;      // convolution identity residual
  double bound_slack = 1e-12;        // check_bound relative slack
  double mellin = 1e-6;              // Cahen-Mellin residual
  double contour = 1e-5;             // smoothed series vs contour residual
  double jensen = 1e-6;              // Jensen integral vs explicit zero sum
  double jensen_convergence = 1e-8;  // node-doubling stop criterion

  static Tolerances defaults() { return {}; }
  static Tolerances strict();
};

/// Resolves "default" or "strict"; throws ConfigError otherwise.
Tolerances tolerance_profile(std::string_view name);

/// Desk-scale capacity limits.
struct Limits {
  std::uint64_t sieve_cap = 100'000'000;
  std::uint64_t table_cap = 10'000'000;
  std::uint64_t tau_cap = 1'000'000;
  std::size_t mean_square_terms_cap = 200'000;
  int root_iterations = 200;
};

}  // namespace lfmv
