#include "lfmv/mean_value.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lfmv/arith.hpp"
#include "lfmv/compensated.hpp"
#include "lfmv/errors.hpp"
#include "lfmv/kernels.hpp"
#include "lfmv/smoothing.hpp"

namespace lfmv::mv {

DirichletPolynomial::DirichletPolynomial(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.m < y.m; });
  freqs_.reserve(terms.size());
  coeffs_.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.m == 0) throw DomainError("Dirichlet polynomial frequencies must be positive");
    if (!freqs_.empty() && freqs_.back() == t.m) {
      throw DomainError("duplicate frequency " + std::to_string(t.m) + " in Dirichlet polynomial");
    }
    freqs_.push_back(t.m);
    coeffs_.push_back(t.a);
  }
}

DirichletPolynomial DirichletPolynomial::scaled(cplx c) const {
  DirichletPolynomial out = *this;
  for (auto& a : out.coeffs_) a *= c;
  return out;
}

cplx DirichletPolynomial::operator()(double t) const {
  CompensatedSum<cplx> acc;
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    acc += coeffs_[i] * std::polar(1.0, -t * std::log(static_cast<double>(freqs_[i])));
  }
  return acc.value();
}

double DirichletPolynomial::l2_mass() const {
  CompensatedSum<double> acc;
  for (auto a : coeffs_) acc += std::norm(a);
  return acc.value();
}

double DirichletPolynomial::mv_weight() const {
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < freqs_.size(); ++i) acc += static_cast<double>(freqs_[i]) * std::norm(coeffs_[i]);
  return acc.value();
}

MeanSquareResult exact_mean_square(const DirichletPolynomial& poly, double T, const MeanSquareOptions& opts) {
  if (!(T >= 1.0)) throw DomainError("exact_mean_square needs T >= 1");
  if (poly.size() > opts.limits.mean_square_terms_cap) {
    throw CapacityError("Dirichlet polynomial has " + std::to_string(poly.size()) + " terms, cap is " +
                        std::to_string(opts.limits.mean_square_terms_cap));
  }
  MeanSquareResult r;
  r.T = T;
  r.diagonal = T * poly.l2_mass();
  r.offdiag = opts.parallel ? kernels::offdiag_omp(poly.frequencies(), poly.coefficients(), T, opts.band)
                            : kernels::offdiag_serial(poly.frequencies(), poly.coefficients(), T, opts.band);
  r.exact = r.diagonal + r.offdiag;
  r.mv_majorant_coeff = poly.mv_weight();
  return r;
}

double mv_discrepancy(const DirichletPolynomial& poly, double T, const MeanSquareOptions& opts) {
  const double weight = poly.mv_weight();
  if (!(weight > 0.0)) throw DomainError("mv_discrepancy of the zero polynomial");
  return std::abs(exact_mean_square(poly, T, opts).offdiag) / weight;
}

DirichletPolynomial random_polynomial(std::mt19937_64& rng, std::size_t max_terms, std::uint64_t max_frequency) {
  if (max_terms == 0 || max_frequency == 0) throw DomainError("random_polynomial needs a non-empty range");
  const std::size_t cap = static_cast<std::size_t>(std::min<std::uint64_t>(max_terms, max_frequency));
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, cap)(rng);
  std::vector<std::uint64_t> pool(max_frequency);
  for (std::uint64_t i = 0; i < max_frequency; ++i) pool[i] = i + 1;
  // partial Fisher-Yates: the first n entries become a uniform sample
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(i, pool.size() - 1)(rng);
    std::swap(pool[i], pool[j]);
  }
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Term> terms;
  terms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = unit(rng);
    const double im = unit(rng);
    terms.push_back({pool[i], {re, im}});
  }
  return DirichletPolynomial(std::move(terms));
}

namespace {

void check_split_domain(double sigma0, double Y) {
  if (!(sigma0 > 0.5 && sigma0 < 1.0)) throw DomainError("sigma0 must lie in (1/2, 1)");
  if (!(Y >= 10.0)) throw DomainError("smoothing parameter Y must be >= 10");
}

std::vector<std::uint64_t> prime_powers_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  const auto primes = arith::sieve_primes(limit);
  for (auto p : primes.primes()) {
    for (std::uint64_t q = p; q <= limit; q *= p) {
      out.push_back(q);
      if (q > limit / p) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

DirichletPolynomial smoothed_polynomial(const hecke::CoefficientTable& table, double sigma0, double Y) {
  check_split_domain(sigma0, Y);
  const std::uint64_t hard = hard_truncation(Y);
  if (table.limit() < hard) throw InsufficientTableError(table.limit(), hard);
  std::vector<Term> terms;
  for (auto m : prime_powers_up_to(hard)) {
    const double md = static_cast<double>(m);
    terms.push_back({m, table.lambda_f(m) * (std::exp(-md / Y) * std::pow(md, -sigma0))});
  }
  return DirichletPolynomial(std::move(terms));
}

TailSplit truncated_tail_split(const hecke::CoefficientTable& table, double sigma0, double Y) {
  const auto full = smoothed_polynomial(table, sigma0, Y);
  TailSplit split;
  split.boundary = static_cast<std::uint64_t>(std::floor(head_boundary(Y)));
  split.hard_truncation = hard_truncation(Y);
  std::vector<Term> head, tail;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto t = full.term(i);
    (t.m <= split.boundary ? head : tail).push_back(t);
  }
  split.head = DirichletPolynomial(std::move(head));
  split.tail = DirichletPolynomial(std::move(tail));
  return split;
}

}  // namespace lfmv::mv
