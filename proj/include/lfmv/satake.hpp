#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lfmv/config.hpp"

namespace lfmv::satake {

using cplx = std::complex<double>;

/// The Satake roots alpha_{p,1..n} of one Euler factor prod_i (1 - alpha_i p^{-s})^{-1}.
/// Root order carries no meaning; consumers treat `alphas` as a multiset.
struct SatakeLocal {
  std::uint64_t p = 2;
  std::vector<cplx> alphas;

  int degree() const noexcept { return static_cast<int>(alphas.size()); }
};

/// A(1,...,1,p,1,...,1) with p in slot j, for j = 1..n-1 (stored at index j-1).
struct HeckeEigenvalueVector {
  std::uint64_t p = 2;
  std::vector<cplx> values;

  int degree() const noexcept { return static_cast<int>(values.size()) + 1; }
};

/// theta_n = num/den, the best known exponent in |alpha_{p,i}| <= p^{theta_n}.
struct ThetaBound {
  int n;
  long num;
  long den;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

/// |prod alpha - 1|.
double product_defect(const SatakeLocal& s);

/// Hausdorff-style distance between {alpha} and {conj alpha} (greedy matching).
double conjugation_defect(const SatakeLocal& s);

/// Multiset distance by greedy nearest matching; inputs of equal size.
double multiset_distance(std::span<const cplx> a, std::span<const cplx> b);

/// Throws IngestionError naming the prime when an invariant fails.
void validate(const SatakeLocal& s, bool self_dual, const Tolerances& tol = {});
void validate(const HeckeEigenvalueVector& h, bool self_dual, const Tolerances& tol = {});

/// e_0 .. e_n of the given values.
std::vector<cplx> elementary_symmetric(std::span<const cplx> values);

/// Coefficients c_0..c_n (ascending, c_n = 1) of X^n + sum_j (-1)^j A_j X^{n-j} + (-1)^n.
std::vector<cplx> hecke_polynomial(const HeckeEigenvalueVector& h);

/// All roots of a monic polynomial (ascending coefficients) by Aberth-Ehrlich
/// simultaneous iteration. Throws NumericError when the final residual
/// max|poly(z)| / (1 + max|c_i|) exceeds `tol.root_residual`.
std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs, const Tolerances& tol = {},
                                   int max_iterations = Limits{}.root_iterations);

SatakeLocal alphas_from_hecke(const HeckeEigenvalueVector& h, const Tolerances& tol = {});
HeckeEigenvalueVector hecke_from_alphas(const SatakeLocal& s);

/// a_f(p^r) = sum alpha_i^r, with the Newton-identity value alongside.
struct PowerSum {
  cplx value;
  cplx newton;
  /// |value - newton| / max(1, sum |alpha_i|^r)
  double discrepancy;
};

PowerSum power_sum(const SatakeLocal& s, int r);

/// Throws DomainError for n < 2.
ThetaBound theta_bound(int n);

struct BoundCheck {
  bool holds;
  std::size_t worst_index;
  double worst_magnitude;
};

/// max_i |alpha_i| <= p^theta (1 + slack).
BoundCheck check_bound(const SatakeLocal& s, double theta, double slack = Tolerances{}.bound_slack);

}  // namespace lfmv::satake
