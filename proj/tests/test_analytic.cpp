#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lfmv/analytic.hpp"
#include "lfmv/errors.hpp"
#include "lfmv/forms.hpp"
#include "lfmv/hecke.hpp"
#include "oracles.hpp"

using namespace lfmv;
using analytic::cplx;

TEST_CASE("complex_gamma classical values") {
  CHECK(std::abs(analytic::complex_gamma(1.0) - 1.0) < 1e-13);
  CHECK(std::abs(analytic::complex_gamma(0.5) - std::sqrt(std::numbers::pi)) < 1e-13);
  CHECK(std::abs(analytic::complex_gamma(5.0) - 24.0) < 1e-11);
  for (double x : {0.3, 1.7, 4.2, 10.5, 30.1}) {
    CHECK(std::abs(analytic::complex_gamma(x).real() - std::tgamma(x)) <= 1e-10 * std::tgamma(x));
  }
  for (double x : {-0.5, -3.7, -9.2}) {
    CHECK(std::abs(analytic::complex_gamma(x).real() - std::tgamma(x)) <= 1e-10 * std::abs(std::tgamma(x)));
  }
  CHECK_THROWS_AS(analytic::complex_gamma(0.0), DomainError);
  CHECK_THROWS_AS(analytic::complex_gamma(-3.0), DomainError);
}

TEST_CASE("complex_gamma recurrence and reflection") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> re(-9.5, 40.0), im(-40.0, 40.0);
  for (int i = 0; i < 100; ++i) {
    const cplx z{re(rng), im(rng)};
    const cplx g1 = analytic::complex_gamma(z + 1.0);
    CHECK(std::abs(g1 - z * analytic::complex_gamma(z)) <= 1e-9 * std::abs(g1));
  }
  for (int i = 0; i < 100; ++i) {
    const cplx z{re(rng) / 5.0 + 0.123, im(rng) / 10.0};
    const cplx lhs = analytic::complex_gamma(z) * analytic::complex_gamma(1.0 - z) * std::sin(std::numbers::pi * z);
    CHECK(std::abs(lhs - std::numbers::pi) <= 1e-8 * std::numbers::pi);
  }
}

TEST_CASE("zeta_em against closed forms and the alternating-series oracle") {
  CHECK(std::abs(analytic::zeta_em(2.0) - std::numbers::pi * std::numbers::pi / 6.0) < 1e-10);
  CHECK(std::abs(analytic::zeta_em(4.0) - std::pow(std::numbers::pi, 4) / 90.0) < 1e-9);
  CHECK(std::abs(analytic::zeta_em(1.5) - oracle::zeta_real(1.5)) < 1e-9);
  CHECK(std::abs(analytic::zeta_em(3.0) - oracle::zeta_real(3.0)) < 1e-9);
  CHECK(analytic::zeta_em(1.5).real() == doctest::Approx(2.612375).epsilon(1e-6));
  CHECK(analytic::zeta_em(3.0).real() == doctest::Approx(1.202057).epsilon(1e-6));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> re(0.5, 4.0), im(-20.0, 20.0);
  for (int i = 0; i < 40; ++i) {
    const cplx s{re(rng), im(rng)};
    CHECK(std::abs(analytic::zeta_em(s) - oracle::zeta_borwein(s)) < 1e-9);
  }
  CHECK_THROWS_AS(analytic::zeta_em(1.0), DomainError);
  CHECK_THROWS_AS(analytic::zeta_em(cplx{-1.5, 0.0}), DomainError);
}

TEST_CASE("zeta_em derivative against difference quotients and high t") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(0.5, 4.0), im(-2000.0, 2000.0);
  for (int i = 0; i < 30; ++i) {
    const cplx s{re(rng), im(rng)};
    const double h = 1e-5;
    const cplx numeric = (analytic::zeta_em(s + h) - analytic::zeta_em(s - h)) / (2 * h);
    CHECK(std::abs(analytic::zeta_em(s, 1) - numeric) < 1e-5 * std::max(1.0, std::abs(numeric)));
  }
  // Euler product region: compare with the direct series at Re s = 4
  const cplx s{4.0, 1234.5};
  cplx direct = 0.0;
  for (int k = 1; k <= 200000; ++k) direct += std::exp(-s * std::log(static_cast<double>(k)));
  CHECK(std::abs(analytic::zeta_em(s) - direct) < 1e-9);
}

TEST_CASE("cahen_mellin_check") {
  analytic::ContourSpec c{2.0, 40.0, 4000};
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) CHECK(analytic::cahen_mellin_check(x, c) <= 1e-6);
  const double large = analytic::cahen_mellin_check(20.0, c);
  CHECK(std::isfinite(large));
  CHECK_THROWS_AS(analytic::cahen_mellin_check(1.0, {2.0, 40.0, 8}), DomainError);
  CHECK_THROWS_AS(analytic::cahen_mellin_check(1.0, {2.0, -1.0, 100}), DomainError);
}

TEST_CASE("cahen_mellin residual decreases as nodes double") {
  double prev = analytic::cahen_mellin_check(1.0, {2.0, 40.0, 250});
  for (std::size_t nodes : {500u, 1000u, 2000u, 4000u}) {
    const double cur = analytic::cahen_mellin_check(1.0, {2.0, 40.0, nodes});
    CHECK(cur <= std::max(prev * 1.1, 1e-14));  // roundoff floor
    prev = cur;
  }
}

TEST_CASE("serial and parallel contour quadrature agree") {
  const analytic::ContourSpec c{2.0, 40.0, 3001};
  CHECK(analytic::cahen_mellin_integral(1.5, c, true) == analytic::cahen_mellin_integral(1.5, c, false));
}

TEST_CASE("smoothed series against the contour integral") {
  const analytic::ContourSpec c{2.0, 40.0, 4000};
  const Tolerances tol;
  const auto ones = forms::FormSpec::all_ones(2);
  const auto r = analytic::smoothed_series_vs_contour(ones, cplx{2.5, 0.0}, 50.0, c, tol);
  CHECK(r.residual <= 1e-5);
  CHECK(r.tail_bound < 1e-6);
  const auto d = analytic::smoothed_series_vs_contour(forms::FormSpec::ramanujan_delta(), cplx{3.0, 0.0}, 100.0, c, tol);
  CHECK(d.residual <= 1e-5);
  const auto z = analytic::smoothed_series_vs_contour(hecke::CoefficientTable::zero(5000, 2),
                                                      analytic::EulerLogDerivative({}, 2, 0.0), cplx{2.5, 0.0}, 50.0, c);
  CHECK(z.series == cplx{});
  CHECK(z.contour == cplx{});
  CHECK_THROWS_AS(analytic::smoothed_series_vs_contour(hecke::CoefficientTable::zero(100, 2),
                                                       analytic::EulerLogDerivative({}, 2, 0.0), cplx{2.5, 0.0}, 50.0,
                                                       c),
                  InsufficientTableError);
}

TEST_CASE("Euler log-derivative of the all-ones form is -n zeta'/zeta") {
  const auto L = analytic::EulerLogDerivative::from_form(forms::FormSpec::all_ones(3), 200000);
  for (cplx s : {cplx{4.0, 0.0}, cplx{4.5, 10.0}, cplx{5.0, -30.0}}) {
    const auto z = analytic::zeta_em_both(s);
    CHECK(std::abs(L(s) + 3.0 * z.derivative / z.zeta) <= L.tail_bound(s.real()) + 1e-9);
  }
}

TEST_CASE("jensen_count examples") {
  const analytic::DiscSpec disc{cplx{0.3, -0.2}, 2.0, 64};
  const cplx c = disc.center;
  auto single = [&](cplx s) { return s - (c + 1.0); };
  CHECK(std::abs(analytic::jensen_count(single, disc, single(c)) - std::log(2.0)) < 1e-6);
  auto expf = [](cplx s) { return std::exp(s); };
  CHECK(std::abs(analytic::jensen_count(expf, disc, expf(c))) < 1e-6);
  const cplx z1{0.5, 0.5}, z2{-0.7, 0.1};
  auto pair = [&](cplx s) { return (s - z1) * (s - z2); };
  const double expect = std::log(2.0 / std::abs(z1 - c)) + std::log(2.0 / std::abs(z2 - c));
  CHECK(std::abs(analytic::jensen_count(pair, disc, pair(c)) - expect) < 1e-6);
  auto vanish = [&](cplx s) { return s - c; };
  CHECK_THROWS_AS(analytic::jensen_count(vanish, disc, vanish(c)), DomainError);
  CHECK_THROWS_AS(analytic::jensen_count(expf, {c, 1.0, 8}, expf(c)), DomainError);
}

TEST_CASE("jensen_count is additive") {
  const analytic::DiscSpec disc{cplx{}, 3.0, 64};
  auto f = [](cplx s) { return (s - cplx{1, 1}) * std::exp(s / 3.0); };
  auto g = [](cplx s) { return (s + cplx{0.5, -2}) * (s - 0.25); };
  auto fg = [&](cplx s) { return f(s) * g(s); };
  const double jf = analytic::jensen_count(f, disc, f(0.0));
  const double jg = analytic::jensen_count(g, disc, g(0.0));
  CHECK(std::abs(analytic::jensen_count(fg, disc, fg(0.0)) - (jf + jg)) < 1e-6);
}

TEST_CASE("zero_count_bound") {
  CHECK(analytic::zero_count_bound(std::log(2.0), 3.0, std::sqrt(5.0)) == 2);
  CHECK(analytic::zero_count_bound(0.0, 3.0, std::sqrt(5.0)) == 0);
  // five zeros inside |s| <= sqrt 5
  const std::vector<cplx> zeros{{0.5, 0.1}, {-1.0, 1.0}, {1.5, -1.2}, {0.0, -2.0}, {-1.9, -0.3}};
  auto f = [&](cplx s) {
    cplx v = 1.0;
    for (auto z : zeros) v *= s - z;
    return v;
  };
  const double j = analytic::jensen_count(f, {cplx{}, 3.0, 64}, f(0.0));
  CHECK(analytic::zero_count_bound(j, 3.0, std::sqrt(5.0)) >= 5);
  CHECK_THROWS_AS(analytic::zero_count_bound(1.0, 2.0, 3.0), DomainError);
}
