#include <doctest.h>

#include <cmath>

#include "lfmv/arith.hpp"
#include "lfmv/errors.hpp"
#include "oracles.hpp"

using namespace lfmv;

TEST_CASE("sieve_primes small tables") {
  const auto t = arith::sieve_primes(10);
  const std::vector<std::uint32_t> expect{2, 3, 5, 7};
  CHECK(std::vector<std::uint32_t>(t.primes().begin(), t.primes().end()) == expect);
  CHECK(arith::sieve_primes(2).size() == 1);
  CHECK(arith::sieve_primes(3).size() == 2);
}

TEST_CASE("sieve_primes agrees with trial division") {
  for (std::uint64_t limit : {100u, 1000u, 10007u, 65536u}) {
    const auto t = arith::sieve_primes(limit);
    const auto ref = oracle::primes_td(limit);
    REQUIRE(t.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(t.primes()[i] == ref[i]);
    for (std::uint64_t m = 0; m <= limit; ++m) CHECK(t.is_prime(m) == oracle::is_prime_td(m));
  }
  CHECK(arith::sieve_primes(100).size() == 25);
}

TEST_CASE("sieve_primes at 10^6") {
  const auto t = arith::sieve_primes(1'000'000);
  CHECK(t.size() == 78498);
  // spot-check against trial division across the range
  for (std::size_t i = 0; i < t.size(); i += 997) CHECK(oracle::is_prime_td(t.primes()[i]));
  for (std::size_t i = 1; i < t.size(); ++i) REQUIRE(t.primes()[i - 1] < t.primes()[i]);
}

TEST_CASE("sieve_primes domain and capacity errors") {
  CHECK_THROWS_AS(arith::sieve_primes(1), DomainError);
  CHECK_THROWS_AS(arith::sieve_primes(0), DomainError);
  Limits small;
  small.sieve_cap = 1000;
  CHECK_THROWS_AS(arith::sieve_primes(1001, small), CapacityError);
}

TEST_CASE("von_mangoldt") {
  CHECK(arith::von_mangoldt(8) == doctest::Approx(std::log(2.0)));
  CHECK(arith::von_mangoldt(6) == 0.0);
  CHECK(arith::von_mangoldt(97) == doctest::Approx(std::log(97.0)));
  CHECK(arith::von_mangoldt(1) == 0.0);
  for (std::uint64_t m = 1; m <= 5000; ++m) {
    const auto d = arith::factorize(m);
    CHECK((arith::von_mangoldt(m) > 0.0) == d.is_prime_power());
  }
}

TEST_CASE("factorize reconstructs m") {
  const arith::FactorSieve sieve(20000);
  for (std::uint64_t m = 1; m <= 20000; ++m) {
    const auto d = arith::factorize(m);
    std::uint64_t prod = 1;
    std::uint64_t last = 0;
    for (const auto& f : d.factors) {
      CHECK(f.prime > last);
      CHECK(f.exponent >= 1);
      CHECK(oracle::is_prime_td(f.prime));
      last = f.prime;
      for (int e = 0; e < f.exponent; ++e) prod *= f.prime;
    }
    CHECK(prod == m);
    CHECK(sieve.factorize(m).factors == d.factors);
  }
}

TEST_CASE("divisor_dn examples and brute force") {
  CHECK(arith::divisor_dn(6, 2) == 4);
  CHECK(arith::divisor_dn(4, 3) == oracle::dn_bruteforce(4, 3));
  CHECK(arith::divisor_dn(4, 3) == 6);
  for (int n = 1; n <= 6; ++n) CHECK(arith::divisor_dn(1, n) == 1);
  for (std::uint64_t m = 1; m <= 200; ++m) {
    for (int n = 1; n <= 4; ++n) CHECK(arith::divisor_dn(m, n) == oracle::dn_bruteforce(m, n));
  }
}

TEST_CASE("divisor count equals d_2 up to 10^4") {
  for (std::uint64_t m = 1; m <= 10000; ++m) {
    std::uint64_t count = 0;
    for (std::uint64_t d = 1; d <= m; ++d) count += (m % d == 0);
    REQUIRE(arith::divisor_dn(m, 2) == count);
  }
}

TEST_CASE("binomial overflow is a capacity error") {
  CHECK(arith::binomial(10, 3) == 120);
  CHECK(arith::binomial(5, 7) == 0);
  CHECK_THROWS_AS(arith::binomial(200, 100), CapacityError);
}
