#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "lfmv/config.hpp"
#include "lfmv/hecke.hpp"

namespace lfmv::mv {

using cplx = std::complex<double>;

struct Term {
  std::uint64_t m;
  cplx a;
};

/// sum a_m m^{-it} over finitely many distinct positive frequencies, kept sorted.
class DirichletPolynomial {
 public:
  DirichletPolynomial() = default;
  /// Sorts by frequency; DomainError on a zero or repeated frequency.
  explicit DirichletPolynomial(std::vector<Term> terms);

  std::size_t size() const noexcept { return freqs_.size(); }
  bool empty() const noexcept { return freqs_.empty(); }
  std::span<const std::uint64_t> frequencies() const noexcept { return freqs_; }
  std::span<const cplx> coefficients() const noexcept { return coeffs_; }
  Term term(std::size_t i) const { return {freqs_.at(i), coeffs_.at(i)}; }

  DirichletPolynomial scaled(cplx c) const;
  cplx operator()(double t) const;

  /// sum |a_m|^2
  double l2_mass() const;
  /// sum m |a_m|^2
  double mv_weight() const;

  bool operator==(const DirichletPolynomial&) const = default;

 private:
  std::vector<std::uint64_t> freqs_;
  std::vector<cplx> coeffs_;
};

struct MeanSquareResult {
  double T = 0.0;
  double exact = 0.0;
  double diagonal = 0.0;
  double offdiag = 0.0;
  double mv_majorant_coeff = 0.0;
};

struct MeanSquareOptions {
  bool parallel = true;
  /// Skip pairs whose frequencies differ by more than `band`. Approximate.
  std::optional<std::uint64_t> band;
  Limits limits{};
};

/// int_T^{2T} |sum a_m m^{-it}|^2 dt in closed form.
MeanSquareResult exact_mean_square(const DirichletPolynomial& poly, double T, const MeanSquareOptions& opts = {});

/// |offdiag| / sum m |a_m|^2.
double mv_discrepancy(const DirichletPolynomial& poly, double T, const MeanSquareOptions& opts = {});

/// 1..max_terms distinct frequencies in [1, max_frequency], coefficients uniform in the unit box.
DirichletPolynomial random_polynomial(std::mt19937_64& rng, std::size_t max_terms, std::uint64_t max_frequency);

/// Lambda_f(m) e^{-m/Y} m^{-sigma0} over every prime power m <= hard_truncation(Y).
DirichletPolynomial smoothed_polynomial(const hecke::CoefficientTable& table, double sigma0, double Y);

struct TailSplit {
  DirichletPolynomial head;
  DirichletPolynomial tail;
  std::uint64_t boundary = 0;        // floor((Y/2)(log Y)^2)
  std::uint64_t hard_truncation = 0;
};

/// Splits smoothed_polynomial at the head boundary.
TailSplit truncated_tail_split(const hecke::CoefficientTable& table, double sigma0, double Y);

}  // namespace lfmv::mv
