#include "lfmv/arith.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lfmv/errors.hpp"

namespace lfmv::arith {

PrimeTable::PrimeTable(std::uint64_t limit, const Limits& limits) : limit_(limit) {
  if (limit < 2) throw DomainError("sieve limit must be at least 2, got " + std::to_string(limit));
  if (limit > limits.sieve_cap) {
    throw CapacityError("sieve limit " + std::to_string(limit) + " exceeds cap " +
                        std::to_string(limits.sieve_cap));
  }
  const std::uint64_t odd_count = (limit + 1) / 2;  // 1, 3, 5, ..., <= limit
  composite_bits_.assign((odd_count + 63) / 64, 0);
  auto set = [&](std::uint64_t i) { composite_bits_[i >> 6] |= (std::uint64_t{1} << (i & 63)); };
  auto test = [&](std::uint64_t i) { return (composite_bits_[i >> 6] >> (i & 63)) & 1U; };
  set(0);  // 1 is not prime
  for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
    if (test(i)) continue;
    const std::uint64_t p = 2 * i + 1;
    for (std::uint64_t j = (p * p) / 2; j < odd_count; j += p) set(j);
  }
  primes_.reserve(static_cast<std::size_t>(1.3 * limit / std::log(static_cast<double>(limit))) + 8);
  primes_.push_back(2);
  for (std::uint64_t i = 1; i < odd_count; ++i) {
    if (!test(i)) primes_.push_back(static_cast<std::uint32_t>(2 * i + 1));
  }
}

bool PrimeTable::is_prime(std::uint64_t m) const {
  if (m > limit_) throw DomainError("is_prime query " + std::to_string(m) + " beyond sieve limit");
  if (m == 2) return true;
  if (m < 2 || m % 2 == 0) return false;
  const std::uint64_t i = m / 2;
  return ((composite_bits_[i >> 6] >> (i & 63)) & 1U) == 0;
}

PrimeTable sieve_primes(std::uint64_t limit, const Limits& limits) { return PrimeTable(limit, limits); }

PrimePowerDecomposition factorize(std::uint64_t m) {
  if (m == 0) throw DomainError("cannot factorise 0");
  PrimePowerDecomposition out;
  out.m = m;
  auto strip = [&](std::uint64_t p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e > 0) out.factors.push_back({p, e});
  };
  strip(2);
  for (std::uint64_t p = 3; p * p <= m; p += 2) strip(p);
  if (m > 1) out.factors.push_back({m, 1});
  return out;
}

bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  if (m % 2 == 0) return m == 2;
  for (std::uint64_t d = 3; d * d <= m; d += 2) {
    if (m % d == 0) return false;
  }
  return true;
}

FactorSieve::FactorSieve(std::uint64_t limit) : spf_(limit + 1, 0) {
  if (limit > std::numeric_limits<std::uint32_t>::max()) throw CapacityError("factor sieve limit too large");
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    if (i * i > limit) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

PrimePowerDecomposition FactorSieve::factorize(std::uint64_t m) const {
  if (m == 0 || m >= spf_.size()) throw DomainError("factor sieve query out of range");
  PrimePowerDecomposition out;
  out.m = m;
  while (m > 1) {
    const std::uint64_t p = spf_[m];
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    out.factors.push_back({p, e});
  }
  return out;
}

double von_mangoldt(std::uint64_t m) {
  if (m < 2) return 0.0;
  const auto d = factorize(m);
  return d.is_prime_power() ? std::log(static_cast<double>(d.factors.front().prime)) : 0.0;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // exact: r * (n-k+i) is divisible by i at every step
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      throw CapacityError("binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") overflows");
    }
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t divisor_dn(std::uint64_t m, int n) {
  if (m == 0) throw DomainError("divisor_dn needs m >= 1");
  if (n < 1) throw DomainError("divisor_dn needs n >= 1");
  std::uint64_t out = 1;
  for (const auto& f : factorize(m).factors) {
    const std::uint64_t e = static_cast<std::uint64_t>(f.exponent);
    out *= binomial(e + static_cast<std::uint64_t>(n) - 1, static_cast<std::uint64_t>(n) - 1);
  }
  return out;
}

}  // namespace lfmv::arith
