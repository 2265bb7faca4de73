#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "lfmv/config.hpp"
#include "lfmv/forms.hpp"
#include "lfmv/hecke.hpp"
#include "lfmv/satake.hpp"

namespace lfmv::analytic {

using cplx = std::complex<double>;

/// log Gamma(z) (Lanczos, g = 7), any branch; intended for Re z >= 1/2.
cplx log_gamma(cplx z);

/// Gamma(z) with reflection for Re z < 1/2. DomainError at the poles 0, -1, -2, ...
cplx complex_gamma(cplx z);

/// zeta(s) and zeta'(s) by Euler-Maclaurin: N = ceil(10 + |Im s|) direct terms and
/// Bernoulli corrections through B_12. Valid for Re s > -1, s != 1.
struct ZetaValue {
  cplx zeta;
  cplx derivative;
};
ZetaValue zeta_em_both(cplx s);
cplx zeta_em(cplx s, int derivative_order = 0);

/// A segment Re w = real_part, |Im w| <= half_length, sampled at `nodes` points.
struct ContourSpec {
  double real_part = 2.0;
  double half_length = 40.0;
  std::size_t nodes = 4000;

  void validate() const;
};

/// A circle |s - center| = radius, starting with `nodes` angular samples.
struct DiscSpec {
  cplx center{};
  double radius = 1.0;
  std::size_t nodes = 64;

  void validate() const;
};

/// (1/2 pi i) int_(c) Gamma(w) x^{-w} dw by the trapezoid rule on the contour.
cplx cahen_mellin_integral(double x, const ContourSpec& contour, bool parallel = true);

/// |cahen_mellin_integral(x) - e^{-x}|.
double cahen_mellin_check(double x, const ContourSpec& contour, bool parallel = true);

/// -L'/L(z) = sum_p log p sum_i alpha_i p^{-z} / (1 - alpha_i p^{-z}) over p <= prime_limit,
/// with a bound for the omitted primes.
class EulerLogDerivative {
 public:
  /// `theta`: a priori bound |alpha_{p,i}| <= p^theta assumed for the omitted primes.
  EulerLogDerivative(std::vector<satake::SatakeLocal> locals, int degree, double theta);
  static EulerLogDerivative from_form(const forms::FormSpec& form, std::uint64_t prime_limit);

  cplx operator()(cplx z) const;
  /// Upper bound on the omitted primes' contribution at Re z = sigma.
  double tail_bound(double sigma) const;
  std::uint64_t prime_limit() const noexcept { return prime_limit_; }

 private:
  std::vector<satake::SatakeLocal> locals_;
  std::vector<double> logs_;
  int degree_;
  double theta_;
  std::uint64_t prime_limit_;
};

struct ContourComparison {
  cplx series;
  cplx contour;
  double residual;
  double tail_bound;  // Euler-product truncation contribution, already scaled to the integral
  std::uint64_t prime_limit;
};

/// Compares sum Lambda_f(m) m^{-s} e^{-m/Y} against
/// (1/2 pi i) int_(c) (-L'/L)(s+w) Gamma(w) Y^w dw, the contour side built from the Euler
/// product. The table must reach hard_truncation(Y).
ContourComparison smoothed_series_vs_contour(const hecke::CoefficientTable& table,
                                             const EulerLogDerivative& neg_log_derivative, cplx s, double Y,
                                             const ContourSpec& contour = {}, bool parallel = true);

/// Form-level driver: builds the table and grows the Euler-product prime limit until its
/// truncation share is below tol.contour / 10. NumericError when no limit up to 10^7 suffices.
ContourComparison smoothed_series_vs_contour(const forms::FormSpec& form, cplx s, double Y,
                                             const ContourSpec& contour = {}, const Tolerances& tol = {});

using HolomorphicFn = std::function<cplx(cplx)>;

/// (1/2pi) int_0^{2pi} log|f(c + R e^{i theta})| d theta - log|f(c)| by the trapezoid rule,
/// doubling the angular nodes until successive values agree to tol.jensen_convergence.
/// By Jensen's formula this is int_0^R n(r)/r dr.
double jensen_count(const HolomorphicFn& f, const DiscSpec& disc, cplx center_value, const Tolerances& tol = {});

/// floor(jensen / log(R / r_inner)): an upper bound for the number of zeros in |s - c| <= r_inner.
/// A 1e-9 slack is added before flooring so rounding never turns an exact integer into an undercount.
std::uint64_t zero_count_bound(double jensen_value, double R, double r_inner);

}  // namespace lfmv::analytic
