#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lfmv/arith.hpp"
#include "lfmv/errors.hpp"
#include "lfmv/forms.hpp"
#include "lfmv/satake.hpp"
#include "oracles.hpp"

using namespace lfmv;
using satake::cplx;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("lfmv_test_" + name);
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("builtin forms") {
  const auto f = forms::load_form("all-ones:3");
  CHECK(f.degree() == 3);
  CHECK(f.id() == "all-ones:3");
  const auto s = f.local(101);
  CHECK(s.alphas == std::vector<cplx>(3, 1.0));
  const auto d = forms::load_form("delta");
  CHECK(d.degree() == 2);
  CHECK(d.source() == forms::Source::ramanujan_delta);
  CHECK(forms::load_form("ramanujan-delta").degree() == 2);
  const auto r = forms::load_form("random-unitary:4:7");
  CHECK(r.seed() == 7);
  CHECK(forms::load_form("random-unitary:4", 99).seed() == 99);
  CHECK_THROWS_AS(forms::load_form("all-ones:1"), ConfigError);
  CHECK_THROWS_AS(forms::load_form("all-ones:x"), ConfigError);
  CHECK_THROWS_AS(forms::load_form("/nonexistent/form.json"), ConfigError);
}

TEST_CASE("random-unitary forms satisfy the local invariants") {
  for (int n : {2, 3, 6}) {
    const auto f = forms::FormSpec::random_unitary(n, 42);
    const auto primes = arith::sieve_primes(104729);  // the first 10^4 primes
    for (auto p : primes.primes()) {
      const auto s = f.local(p);
      REQUIRE(s.degree() == n);
      REQUIRE(satake::product_defect(s) <= 1e-10);
      REQUIRE(satake::conjugation_defect(s) <= 1e-10);
    }
    CHECK(f.local(101).alphas == forms::FormSpec::random_unitary(n, 42).local(101).alphas);
    CHECK(f.local(101).alphas != forms::FormSpec::random_unitary(n, 43).local(101).alphas);
  }
}

TEST_CASE("tau generator against naive expansion") {
  const auto tau = forms::tau_coefficients(600, true);
  const auto ref = oracle::tau_naive(600);
  for (std::size_t m = 1; m <= 600; ++m) REQUIRE(tau[m] == ref[m]);
  CHECK(tau[1] == 1);
  CHECK(tau[2] == -24);
  CHECK(tau[3] == 252);
  CHECK(tau[6] == -6048);
  const auto serial = forms::tau_coefficients(600, false);
  CHECK(serial == tau);
  Limits small;
  small.tau_cap = 100;
  CHECK_THROWS_AS(forms::tau_coefficients(101, true, small), CapacityError);
}

TEST_CASE("explicit form files") {
  const auto good = write_temp("good.json", R"({
    "name": "tiny", "degree": 2, "self_dual": true,
    "source": {"type": "explicit", "primes": [
      {"p": 2, "alphas": [[0, 1], [0, -1]]},
      {"p": 3, "alphas": [[1, 0], [1, 0]]}
    ]}})");
  const auto f = forms::load_form(good.string());
  CHECK(f.id() == "tiny");
  CHECK(f.data_limit() == 4);
  CHECK(f.local(2).alphas.size() == 2);
  CHECK_THROWS_AS(f.local(5), IngestionError);

  const auto bad_product = write_temp("bad.json", R"({
    "name": "bad", "degree": 2, "self_dual": true,
    "source": {"type": "explicit", "primes": [ {"p": 2, "alphas": [[1.01, 0], [1, 0]]} ]}})");
  try {
    (void)forms::load_form(bad_product.string());
    FAIL("expected IngestionError");
  } catch (const IngestionError& e) {
    CHECK(e.prime() == 2);
  }

  const auto bad_schema = write_temp("schema.json", R"({"name": "x", "degree": "two", "self_dual": true,
    "source": {"type": "all-ones"}})");
  CHECK_THROWS_AS(forms::load_form(bad_schema.string()), ConfigError);
  const auto bad_json = write_temp("syntax.json", "{\"name\": ");
  CHECK_THROWS_AS(forms::load_form(bad_json.string()), ConfigError);
}

TEST_CASE("form documents round trip") {
  for (const auto& spec : {"all-ones:3", "random-unitary:5:8", "delta"}) {
    const auto f = forms::load_form(spec);
    const auto doc = forms::form_to_json(f);
    const auto g = forms::parse_form(doc);
    CHECK(g.id() == f.id());
    CHECK(g.degree() == f.degree());
    CHECK(g.local(31).alphas == f.local(31).alphas);
  }
  const auto f = forms::load_form("random-unitary:3:2");
  const auto g = forms::parse_form(forms::form_to_json(f, 100));
  CHECK(g.source() == forms::Source::explicit_data);
  const auto sieve = arith::sieve_primes(100);
  for (auto p : sieve.primes()) CHECK(g.local(p).alphas == f.local(p).alphas);
}
