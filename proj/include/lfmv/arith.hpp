#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lfmv/config.hpp"

namespace lfmv::arith {

/// All primes up to `limit`, produced by an odd-only bit-packed sieve.
class PrimeTable {
 public:
  explicit PrimeTable(std::uint64_t limit, const Limits& limits = {});

  std::uint64_t limit() const noexcept { return limit_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }
  bool is_prime(std::uint64_t m) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> composite_bits_;  // bit i <=> 2i+1 composite
  std::vector<std::uint32_t> primes_;
};

/// Throws DomainError for limit < 2 and CapacityError above `limits.sieve_cap`.
PrimeTable sieve_primes(std::uint64_t limit, const Limits& limits = {});

struct PrimePower {
  std::uint64_t prime;
  int exponent;
  bool operator==(const PrimePower&) const = default;
};

/// m = prod p^e with primes strictly increasing.
struct PrimePowerDecomposition {
  std::uint64_t m = 1;
  std::vector<PrimePower> factors;

  bool is_prime_power() const noexcept { return factors.size() == 1; }
};

/// Trial division; intended for m up to ~1e12.
PrimePowerDecomposition factorize(std::uint64_t m);

/// Deterministic trial-division primality test.
bool is_prime(std::uint64_t m);

/// Smallest-prime-factor table for fast repeated factorisation of m <= limit.
class FactorSieve {
 public:
  explicit FactorSieve(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return spf_.size() - 1; }
  std::uint32_t smallest_factor(std::uint64_t m) const { return spf_[m]; }
  PrimePowerDecomposition factorize(std::uint64_t m) const;

 private:
  std::vector<std::uint32_t> spf_;
};

/// log p if m = p^k (k >= 1), else 0.
double von_mangoldt(std::uint64_t m);

/// Binomial coefficient; throws CapacityError on 64-bit overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Number of ordered factorisations m = d_1 ... d_n.
std::uint64_t divisor_dn(std::uint64_t m, int n);

}  // namespace lfmv::arith
