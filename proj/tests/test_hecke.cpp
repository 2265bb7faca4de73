#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "lfmv/arith.hpp"
#include "lfmv/errors.hpp"
#include "lfmv/forms.hpp"
#include "lfmv/hecke.hpp"
#include "lfmv/satake.hpp"
#include "oracles.hpp"

using namespace lfmv;
using hecke::cplx;

namespace {

satake::SatakeLocal unitary_local(std::mt19937_64& rng, int n, std::uint64_t p) {
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  satake::SatakeLocal s{p, {}};
  for (int j = 0; j < n / 2; ++j) {
    const double t = angle(rng);
    s.alphas.push_back(std::polar(1.0, t));
    s.alphas.push_back(std::polar(1.0, -t));
  }
  if (n % 2 == 1) s.alphas.emplace_back(1.0, 0.0);
  return s;
}

}  // namespace

TEST_CASE("local_A_powers for all-ones roots are d_n(p^k)") {
  for (int n = 1; n <= 6; ++n) {
    const auto h = hecke::local_A_powers({2, std::vector<cplx>(static_cast<std::size_t>(n), 1.0)}, 20);
    for (int k = 0; k <= 20; ++k) {
      CHECK(h[static_cast<std::size_t>(k)].real() == static_cast<double>(arith::divisor_dn(1ull << k, n)));
      CHECK(h[static_cast<std::size_t>(k)].imag() == 0.0);
    }
  }
}

TEST_CASE("local_A_powers for {i, -i} is 1, 0, -1, 0, ...") {
  const auto h = hecke::local_A_powers({3, {cplx{0, 1}, cplx{0, -1}}}, 12);
  for (int k = 0; k <= 12; ++k) {
    const double expect = (k % 2 == 1) ? 0.0 : ((k / 2) % 2 == 0 ? 1.0 : -1.0);
    CHECK(std::abs(h[static_cast<std::size_t>(k)] - expect) < 1e-15);
  }
}

TEST_CASE("local_A_powers matches the product of geometric series") {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 6; ++n) {
    const auto s = unitary_local(rng, n, 7);
    const auto h = hecke::local_A_powers(s, 15);
    const auto ref = oracle::euler_factor_series(s.alphas, 15);
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(std::abs(h[k] - ref[k]) < 1e-11);
  }
}

TEST_CASE("log-derivative coefficients from the h series are the power sums") {
  std::mt19937_64 rng(17);
  for (auto p : arith::sieve_primes(50).primes()) {
    for (int n = 2; n <= 5; ++n) {
      const auto s = unitary_local(rng, n, p);
      const auto h = hecke::local_A_powers(s, 12);
      const auto b = oracle::log_derivative_coefficients(h);
      for (int r = 1; r <= 12; ++r) {
        CHECK(std::abs(b[static_cast<std::size_t>(r)] - satake::power_sum(s, r).value) < 1e-8);
      }
    }
  }
}

TEST_CASE("tuple_coefficient examples") {
  std::mt19937_64 rng(23);
  const auto s = unitary_local(rng, 3, 5);
  const std::vector<int> zero{0, 0};
  CHECK(std::abs(hecke::tuple_coefficient(s, zero).value - 1.0) < 1e-15);
  const auto h = hecke::local_A_powers(s, 3);
  const auto e = satake::hecke_from_alphas(s);
  CHECK(std::abs(hecke::tuple_coefficient(s, std::vector<int>{1, 0}).value - h[1]) < 1e-14);
  CHECK(std::abs(hecke::tuple_coefficient(s, std::vector<int>{0, 1}).value - e.values[1]) < 1e-14);
  CHECK_THROWS_AS(hecke::tuple_coefficient(s, std::vector<int>{1}), DomainError);
  CHECK_THROWS_AS(hecke::tuple_coefficient(s, std::vector<int>{-1, 0}), DomainError);
}

TEST_CASE("verify_hecke_relation examples") {
  std::mt19937_64 rng(29);
  const auto s3 = unitary_local(rng, 3, 2);
  CHECK(hecke::verify_hecke_relation(s3, 2, std::vector<int>{1, 0}) <= 1e-9);
  const auto s2 = unitary_local(rng, 2, 3);
  CHECK(hecke::verify_hecke_relation(s2, 3, std::vector<int>{1}) <= 1e-9);
  // A(p)^2 = A(p^2) + 1 written out directly
  const auto h = hecke::local_A_powers(s2, 2);
  CHECK(std::abs(h[1] * h[1] - h[2] - 1.0) < 1e-12);
  for (int n = 2; n <= 5; ++n) {
    const auto s = unitary_local(rng, n, 5);
    CHECK(hecke::verify_hecke_relation(s, 1, std::vector<int>(static_cast<std::size_t>(n - 1), 2)) == 0.0);
  }
  CHECK_THROWS_AS(hecke::verify_hecke_relation(s3, 6, std::vector<int>{1, 0}), DomainError);
}

TEST_CASE("verify_hecke_relation over small exponents and prime powers") {
  std::mt19937_64 rng(31);
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n) {
    for (int sample = 0; sample < 20; ++sample) {
      hecke::LocalCoefficients lc(unitary_local(rng, n, 3));
      std::vector<int> k(static_cast<std::size_t>(n - 1), 0);
      while (true) {
        for (int a = 0; a <= 3; ++a) worst = std::max(worst, hecke::verify_hecke_relation(lc, a, k));
        std::size_t i = 0;
        while (i < k.size() && k[i] == 3) k[i++] = 0;
        if (i == k.size()) break;
        ++k[i];
      }
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("dual_symmetry_check") {
  std::mt19937_64 rng(37);
  const auto s = unitary_local(rng, 3, 7);
  CHECK(hecke::dual_symmetry_check(s, std::vector<int>{2, 1}) <= 1e-9);
  CHECK(hecke::dual_symmetry_check({7, {1.0, 1.0, 1.0, 1.0}}, std::vector<int>{3, 0, 1}) <= 1e-15);
  const auto s5 = unitary_local(rng, 5, 11);
  const std::vector<int> palindrome{1, 2, 2, 1};
  CHECK(std::abs(hecke::tuple_coefficient(s5, palindrome).value.imag()) <= 1e-9);
}

TEST_CASE("coefficient table for all-ones forms is d_n") {
  for (int n = 2; n <= 4; ++n) {
    const auto t = hecke::build_coefficient_table(forms::FormSpec::all_ones(n), 3000);
    CHECK(t.A(1) == cplx{1.0, 0.0});
    for (std::uint64_t m = 1; m <= 3000; ++m) {
      REQUIRE(t.A(m).real() == static_cast<double>(arith::divisor_dn(m, n)));
      CHECK(std::abs(t.lambda_f(m) - n * arith::von_mangoldt(m)) < 1e-12);
    }
  }
}

TEST_CASE("coefficient table invariants on unitary forms") {
  for (const auto& spec : {"random-unitary:3:4", "random-unitary:6:1", "delta"}) {
    const auto form = forms::load_form(spec);
    const auto t = hecke::build_coefficient_table(form, 10000);
    CHECK(t.A(1) == cplx{1.0, 0.0});
    for (std::uint64_t m = 1; m <= 10000; ++m) {
      REQUIRE(std::abs(t.A(m).imag()) <= 1e-9);
      REQUIRE(std::abs(t.A(m)) <= static_cast<double>(arith::divisor_dn(m, form.degree())) * (1 + 1e-9));
    }
    for (std::uint64_t m = 2; m <= 100; ++m) {
      for (std::uint64_t k = 2; m * k <= 10000; ++k) {
        if (std::gcd(m, k) != 1) continue;
        REQUIRE(std::abs(t.A(m * k) - t.A(m) * t.A(k)) <= 1e-9);
      }
    }
    const arith::FactorSieve sieve(10000);
    for (std::uint64_t m = 2; m <= 10000; ++m) {
      const auto d = sieve.factorize(m);
      if (d.is_prime_power()) {
        const auto s = form.local(d.factors[0].prime);
        const auto a = satake::power_sum(s, d.factors[0].exponent).value;
        CHECK(std::abs(t.lambda_f(m) - std::log(static_cast<double>(d.factors[0].prime)) * a) < 1e-12);
      } else {
        CHECK(t.lambda_f(m) == cplx{});
      }
    }
  }
}

TEST_CASE("Delta table A(2)") {
  const auto t = hecke::build_coefficient_table(forms::FormSpec::ramanujan_delta(), 10);
  CHECK(t.A(2).real() == doctest::Approx(-24.0 / std::pow(2.0, 5.5)).epsilon(1e-12));
  CHECK(t.A(2).real() == doctest::Approx(-0.530330).epsilon(1e-6));
}

TEST_CASE("serial and parallel table builds agree") {
  const auto form = forms::load_form("random-unitary:4:9");
  const auto a = hecke::build_coefficient_table(form, 5000, true);
  const auto b = hecke::build_coefficient_table(form, 5000, false);
  for (std::uint64_t m = 1; m <= 5000; ++m) {
    REQUIRE(a.A(m) == b.A(m));
    REQUIRE(a.lambda_f(m) == b.lambda_f(m));
  }
}

TEST_CASE("missing local data names the prime") {
  std::vector<satake::SatakeLocal> locals{{2, {1.0, 1.0}}, {3, {1.0, 1.0}}, {7, {1.0, 1.0}}};
  const auto form = forms::FormSpec::from_local_data("gap", 2, locals);
  try {
    (void)hecke::build_coefficient_table(form, 10);
    FAIL("expected IngestionError");
  } catch (const IngestionError& e) {
    CHECK(e.prime() == 5);
  }
  CHECK_NOTHROW((void)hecke::build_coefficient_table(form, 4));
}
