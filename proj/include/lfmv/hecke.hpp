#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lfmv/config.hpp"
#include "lfmv/forms.hpp"
#include "lfmv/satake.hpp"

namespace lfmv::hecke {

using satake::cplx;
using wide = std::complex<long double>;

/// A(p^k, 1, ..., 1) = h_k(alphas) for k = 0..kmax, from
/// h_k = sum_{j=1}^{min(k,n)} (-1)^{j-1} e_j h_{k-j}.
std::vector<cplx> local_A_powers(const satake::SatakeLocal& s, int kmax);

/// A(p^{k_1}, ..., p^{k_{n-1}}) evaluated as the Jacobi-Trudi determinant
/// det(h_{lambda_i - i + j}) with lambda_i = k_i + ... + k_{n-1}.
/// Holds the h_k cache so repeated evaluations at one prime stay cheap.
class LocalCoefficients {
 public:
  explicit LocalCoefficients(const satake::SatakeLocal& s);

  const satake::SatakeLocal& local() const noexcept { return local_; }
  wide h(int k);
  wide tuple(std::span<const int> exponents);

 private:
  satake::SatakeLocal local_;
  std::vector<wide> e_;
  std::vector<wide> h_;
};

struct TupleCoefficient {
  std::uint64_t p;
  std::vector<int> exponents;
  cplx value;
};

/// Throws DomainError unless exponents has n-1 non-negative entries.
TupleCoefficient tuple_coefficient(const satake::SatakeLocal& s, std::span<const int> exponents);

/// |A(m,1,..,1) A(m_1,..) - sum_{prod c_l = m, c_l | m_l} A(m_1 c_n/c_1, m_2 c_1/c_2, ...)|
/// for m = p^a and m_l = p^{k_l}. DomainError if m is not a power of s.p.
double verify_hecke_relation(const satake::SatakeLocal& s, std::uint64_t m, std::span<const int> exponents);
double verify_hecke_relation(LocalCoefficients& local, int a, std::span<const int> exponents);

/// |A(reversed exponents) - conj(A(exponents))|.
double dual_symmetry_check(const satake::SatakeLocal& s, std::span<const int> exponents);
double dual_symmetry_check(LocalCoefficients& local, std::span<const int> exponents);

/// Dense A(m,1,...,1) and Lambda_f(m) for 1 <= m <= limit. Index 0 is unused.
class CoefficientTable {
 public:
  CoefficientTable(std::string form_id, int degree, std::uint64_t limit, std::vector<cplx> A,
                   std::vector<cplx> lambda);

  /// A = delta_{m,1}, Lambda_f = 0: the degenerate zero form.
  static CoefficientTable zero(std::uint64_t limit, int degree = 1);

  const std::string& form_id() const noexcept { return form_id_; }
  int degree() const noexcept { return degree_; }
  std::uint64_t limit() const noexcept { return limit_; }
  cplx A(std::uint64_t m) const { return A_.at(m); }
  cplx lambda_f(std::uint64_t m) const { return lambda_.at(m); }
  std::span<const cplx> A_values() const noexcept { return A_; }
  std::span<const cplx> lambda_values() const noexcept { return lambda_; }

 private:
  std::string form_id_;
  int degree_;
  std::uint64_t limit_;
  std::vector<cplx> A_;
  std::vector<cplx> lambda_;
};

/// A on prime powers from local_A_powers, extended multiplicatively; Lambda_f(p^r) = log p * a_f(p^r).
/// The prime loop and the multiplicative extension run under OpenMP unless `parallel` is false;
/// output is identical either way.
CoefficientTable build_coefficient_table(const forms::FormSpec& form, std::uint64_t M, bool parallel = true,
                                         const Limits& limits = {});

}  // namespace lfmv::hecke
