#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lfmv/errors.hpp"
#include "lfmv/forms.hpp"
#include "lfmv/hecke.hpp"
#include "lfmv/kernels.hpp"
#include "lfmv/mean_value.hpp"
#include "lfmv/smoothing.hpp"
#include "oracles.hpp"

using namespace lfmv;
using mv::cplx;

namespace {

double quadrature_mean_square(const mv::DirichletPolynomial& p, double T) {
  // split [T, 2T] into unit panels so each adaptive call sees a few oscillations
  double total = 0.0;
  const int panels = static_cast<int>(std::ceil(T));
  const double w = T / panels;
  for (int i = 0; i < panels; ++i) {
    total += oracle::integrate([&](double t) { return std::norm(p(t)); }, T + i * w, T + (i + 1) * w);
  }
  return total;
}

}  // namespace

TEST_CASE("DirichletPolynomial construction") {
  const mv::DirichletPolynomial p({{5, 1.0}, {2, 2.0}, {9, cplx{0, 1}}});
  CHECK(p.size() == 3);
  CHECK(p.frequencies()[0] == 2);
  CHECK(p.frequencies()[2] == 9);
  CHECK_THROWS_AS(mv::DirichletPolynomial({{3, 1.0}, {3, 2.0}}), DomainError);
  CHECK_THROWS_AS(mv::DirichletPolynomial({{0, 1.0}}), DomainError);
}

TEST_CASE("exact_mean_square examples") {
  const mv::DirichletPolynomial one({{1, 1.0}});
  for (double T : {1.0, 7.5, 1000.0}) CHECK(mv::exact_mean_square(one, T).exact == doctest::Approx(T).epsilon(1e-15));

  const mv::DirichletPolynomial two({{2, 1.0}, {3, 1.0}});
  const double T = 100.0;
  const double L = std::log(1.5);
  const cplx i{0.0, 1.0};
  const cplx inner = (std::exp(i * 2.0 * T * L) - std::exp(i * T * L)) / (i * L);
  const double closed = 2 * T + 2.0 * inner.real();
  const auto r = mv::exact_mean_square(two, T);
  CHECK(std::abs(r.exact - closed) <= 1e-12 * std::abs(closed));
  CHECK(std::abs(r.exact - quadrature_mean_square(two, T)) <= 1e-6 * std::abs(r.exact));
  CHECK(std::abs(r.exact - (r.diagonal + r.offdiag)) <= 1e-9 * r.exact);
  CHECK_THROWS_AS(mv::exact_mean_square(two, 0.5), DomainError);
}

TEST_CASE("exact_mean_square against adaptive quadrature") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> Tdist(1.0, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = mv::random_polynomial(rng, 12, 40);
    const double T = Tdist(rng);
    const auto r = mv::exact_mean_square(p, T);
    CHECK(r.exact >= 0.0);
    CHECK(r.diagonal >= 0.0);
    CHECK(std::abs(r.exact - quadrature_mean_square(p, T)) <= 1e-6 * r.exact);
  }
}

TEST_CASE("mean square scales by |c|^2") {
  std::mt19937_64 rng(5);
  const auto p = mv::random_polynomial(rng, 30, 200);
  const cplx c{1.5, -0.75};
  const auto a = mv::exact_mean_square(p, 250.0);
  const auto b = mv::exact_mean_square(p.scaled(c), 250.0);
  CHECK(std::abs(b.exact - std::norm(c) * a.exact) <= 1e-12 * b.exact);
}

TEST_CASE("off-diagonal share shrinks as T grows") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = mv::random_polynomial(rng, 50, 300);
    if (p.size() < 2) continue;
    double prev = std::numeric_limits<double>::infinity();
    for (double T : {1e2, 1e3, 1e4}) {
      const auto r = mv::exact_mean_square(p, T);
      const double share = std::abs(r.offdiag) / r.diagonal;
      CHECK(share <= 3 * std::numbers::pi * r.mv_majorant_coeff / r.diagonal);
      prev = share;
    }
    CHECK(prev < 1.0);
  }
}

TEST_CASE("mv_discrepancy") {
  CHECK(mv::mv_discrepancy(mv::DirichletPolynomial({{4, 2.0}}), 10.0) == 0.0);
  CHECK_THROWS_AS(mv::mv_discrepancy(mv::DirichletPolynomial(), 10.0), DomainError);
  CHECK_THROWS_AS(mv::mv_discrepancy(mv::DirichletPolynomial({{4, 0.0}}), 10.0), DomainError);
  std::mt19937_64 rng(123);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = mv::random_polynomial(rng, 100, 1000);
    for (double T : {10.0, 100.0, 1000.0}) worst = std::max(worst, mv::mv_discrepancy(p, T));
  }
  CHECK(worst <= 3 * std::numbers::pi);
}

TEST_CASE("capacity cap on the number of terms") {
  std::vector<mv::Term> terms;
  for (std::uint64_t m = 1; m <= 20; ++m) terms.push_back({m, 1.0});
  mv::MeanSquareOptions opts;
  opts.limits.mean_square_terms_cap = 10;
  CHECK_THROWS_AS(mv::exact_mean_square(mv::DirichletPolynomial(terms), 10.0, opts), CapacityError);
}

TEST_CASE("serial and parallel off-diagonal kernels agree") {
  std::mt19937_64 rng(4);
  const auto p = mv::random_polynomial(rng, 400, 5000);
  const double a = kernels::offdiag_serial(p.frequencies(), p.coefficients(), 321.0);
  const double b = kernels::offdiag_omp(p.frequencies(), p.coefficients(), 321.0);
  CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  const double banded = kernels::offdiag_omp(p.frequencies(), p.coefficients(), 321.0, 5000);
  CHECK(banded == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("truncated_tail_split") {
  CHECK(static_cast<std::uint64_t>(std::floor(head_boundary(10.0))) == 26);
  const int n = 3;
  const auto table = hecke::build_coefficient_table(forms::FormSpec::all_ones(n), hard_truncation(10.0));
  const auto split = mv::truncated_tail_split(table, 0.6, 10.0);
  CHECK(split.boundary == 26);
  CHECK(split.head.frequencies().back() <= 26);
  CHECK(split.tail.frequencies().front() > 26);
  CHECK(split.tail.frequencies().back() <= hard_truncation(10.0));
  for (std::size_t i = 0; i < split.head.size(); ++i) {
    const auto t = split.head.term(i);
    if (oracle::is_prime_td(t.m)) {
      const double p = static_cast<double>(t.m);
      CHECK(std::abs(t.a - n * std::log(p) * std::exp(-p / 10.0) * std::pow(p, -0.6)) < 1e-14);
    }
  }
  std::size_t prime_powers = 0;
  for (std::uint64_t m = 2; m <= hard_truncation(10.0); ++m) {
    std::uint64_t q = m, p = 2;
    while (q % p != 0) ++p;
    while (q % p == 0) q /= p;
    prime_powers += (q == 1);
  }
  CHECK(split.head.size() + split.tail.size() == prime_powers);
  CHECK_THROWS_AS(mv::truncated_tail_split(hecke::CoefficientTable::zero(100, 2), 0.6, 10.0), InsufficientTableError);
  CHECK_THROWS_AS(mv::truncated_tail_split(table, 0.4, 10.0), DomainError);
  CHECK_THROWS_AS(mv::truncated_tail_split(table, 0.6, 5.0), DomainError);
}
