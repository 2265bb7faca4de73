#include "lfmv/analytic.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>

#include "lfmv/arith.hpp"
#include "lfmv/compensated.hpp"
#include "lfmv/errors.hpp"
#include "lfmv/kernels.hpp"
#include "lfmv/smoothing.hpp"

namespace lfmv::analytic {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_pole(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && std::nearbyint(z.real()) == z.real();
}

}  // namespace

cplx log_gamma(cplx z) {
  if (is_pole(z)) throw DomainError("log_gamma: pole at " + std::to_string(z.real()));
  z -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx complex_gamma(cplx z) {
  if (is_pole(z)) throw DomainError("complex_gamma: pole at " + std::to_string(z.real()));
  if (z.real() < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * z) * std::exp(log_gamma(1.0 - z)));
  }
  return std::exp(log_gamma(z));
}

ZetaValue zeta_em_both(cplx s) {
  if (s == cplx{1.0, 0.0}) throw DomainError("zeta_em: pole at s = 1");
  if (s.real() <= -1.0) throw DomainError("zeta_em: needs Re s > -1");
  const std::size_t N = static_cast<std::size_t>(std::ceil(10.0 + std::abs(s.imag())));

  CompensatedSum<cplx> z, dz;
  for (std::size_t k = 1; k < N; ++k) {
    const double logk = std::log(static_cast<double>(k));
    const cplx term = std::exp(-s * logk);
    z += term;
    dz += -logk * term;
  }
  const double n = static_cast<double>(N);
  const double logn = std::log(n);
  const cplx n_pow = std::exp(-s * logn);  // N^{-s}
  const cplx sm1 = s - 1.0;
  z += n * n_pow / sm1;
  dz += -logn * n * n_pow / sm1 - n * n_pow / (sm1 * sm1);
  z += 0.5 * n_pow;
  dz += -0.5 * logn * n_pow;

  // B_{2j} / (2j)! for j = 1..6
  constexpr std::array<double, 6> bernoulli = {1.0 / 6.0,    -1.0 / 30.0, 1.0 / 42.0,
                                               -1.0 / 30.0,  5.0 / 66.0,  -691.0 / 2730.0};
  double factorial = 1.0;
  cplx poly{1.0, 0.0};   // s (s+1) ... (s+2j-2)
  cplx dpoly{0.0, 0.0};  // derivative of poly
  int next_factor = 0;   // next (s + next_factor) to multiply in
  cplx n_pow_j = n_pow / n;  // N^{-s-2j+1} for j = 1
  for (std::size_t j = 1; j <= bernoulli.size(); ++j) {
    const int last = static_cast<int>(2 * j - 2);
    while (next_factor <= last) {
      const cplx f = s + static_cast<double>(next_factor);
      dpoly = dpoly * f + poly;
      poly *= f;
      ++next_factor;
    }
    factorial *= static_cast<double>((2 * j - 1) * (2 * j));
    const double c = bernoulli[j - 1] / factorial;
    z += c * poly * n_pow_j;
    dz += c * (dpoly - logn * poly) * n_pow_j;
    n_pow_j /= n * n;
  }
  return {z.value(), dz.value()};
}

cplx zeta_em(cplx s, int derivative_order) {
  if (derivative_order != 0 && derivative_order != 1) throw DomainError("zeta_em: derivative order must be 0 or 1");
  const auto v = zeta_em_both(s);
  return derivative_order == 0 ? v.zeta : v.derivative;
}

void ContourSpec::validate() const {
  if (nodes < 16) throw DomainError("contour needs at least 16 nodes");
  if (!(half_length > 0.0)) throw DomainError("contour half-length must be positive");
}

void DiscSpec::validate() const {
  if (nodes < 64) throw DomainError("disc needs at least 64 angular nodes");
  if (!(radius > 0.0)) throw DomainError("disc radius must be positive");
}

cplx cahen_mellin_integral(double x, const ContourSpec& contour, bool parallel) {
  contour.validate();
  if (!(x > 0.0)) throw DomainError("cahen_mellin: x must be positive");
  if (contour.real_part <= 0.0) throw DomainError("cahen_mellin: contour must lie right of the pole at 0");
  const double logx = std::log(x);
  const kernels::LineIntegrand f = [logx](cplx w) { return complex_gamma(w) * std::exp(-w * logx); };
  return parallel ? kernels::vertical_trapezoid_omp(f, contour.real_part, contour.half_length, contour.nodes)
                  : kernels::vertical_trapezoid_serial(f, contour.real_part, contour.half_length, contour.nodes);
}

double cahen_mellin_check(double x, const ContourSpec& contour, bool parallel) {
  return std::abs(cahen_mellin_integral(x, contour, parallel) - std::exp(-x));
}

EulerLogDerivative::EulerLogDerivative(std::vector<satake::SatakeLocal> locals, int degree, double theta)
    : locals_(std::move(locals)), degree_(degree), theta_(theta), prime_limit_(1) {
  std::sort(locals_.begin(), locals_.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  for (const auto& s : locals_) {
    logs_.push_back(std::log(static_cast<double>(s.p)));
    prime_limit_ = std::max<std::uint64_t>(prime_limit_, s.p);
  }
}

EulerLogDerivative EulerLogDerivative::from_form(const forms::FormSpec& form, std::uint64_t prime_limit) {
  std::vector<satake::SatakeLocal> locals;
  if (prime_limit >= 2) {
    form.prepare(prime_limit);
    const auto primes = arith::sieve_primes(prime_limit);
    for (auto p : primes.primes()) locals.push_back(form.local(p));
  }
  EulerLogDerivative out(std::move(locals), form.degree(), form.unitary() ? 0.0 : 0.5);
  out.prime_limit_ = std::max<std::uint64_t>(prime_limit, 1);
  return out;
}

cplx EulerLogDerivative::operator()(cplx z) const {
  CompensatedSum<cplx> acc;
  for (std::size_t i = 0; i < locals_.size(); ++i) {
    const cplx base = std::exp(-z * logs_[i]);  // p^{-z}
    cplx local{};
    for (auto a : locals_[i].alphas) {
      const cplx x = a * base;
      local += x / (1.0 - x);
    }
    acc += logs_[i] * local;
  }
  return acc.value();
}

double EulerLogDerivative::tail_bound(double sigma) const {
  // n * sum_{m > P} log m * m^{-(sigma - theta)} / (1 - P^{-(sigma - theta)})
  //   <= n / (1 - P^{-a}) * P^{1-a} (log P / (a-1) + 1/(a-1)^2),  a = sigma - theta > 1.
  const double a = sigma - theta_;
  if (a <= 1.0) return std::numeric_limits<double>::infinity();
  const double P = static_cast<double>(std::max<std::uint64_t>(prime_limit_, 2));
  const double logP = std::log(P);
  const double integral = std::pow(P, 1.0 - a) * (logP / (a - 1.0) + 1.0 / ((a - 1.0) * (a - 1.0)));
  return static_cast<double>(degree_) * integral / (1.0 - std::pow(P, -a));
}

namespace {

// (1/2pi) int_{-V}^{V} |Gamma(c+iv)| dv <= (V/pi) Gamma(c) for c > 0.
double gamma_line_mass(const ContourSpec& contour) {
  return contour.half_length / std::numbers::pi * std::tgamma(contour.real_part);
}

}  // namespace

ContourComparison smoothed_series_vs_contour(const hecke::CoefficientTable& table,
                                             const EulerLogDerivative& neg_log_derivative, cplx s, double Y,
                                             const ContourSpec& contour, bool parallel) {
  contour.validate();
  if (s.real() < 2.0) throw DomainError("smoothed_series_vs_contour needs Re s >= 2");
  if (Y < 10.0) throw DomainError("smoothed_series_vs_contour needs Y >= 10");
  const std::uint64_t needed = hard_truncation(Y);
  if (table.limit() < needed) throw InsufficientTableError(table.limit(), needed);

  CompensatedSum<cplx> series;
  for (std::uint64_t m = 2; m <= needed; ++m) {
    const cplx c = table.lambda_f(m);
    if (c == cplx{}) continue;
    const double md = static_cast<double>(m);
    series += c * std::exp(-s * std::log(md)) * std::exp(-md / Y);
  }

  const double logY = std::log(Y);
  const kernels::LineIntegrand f = [&](cplx w) {
    return neg_log_derivative(s + w) * complex_gamma(w) * std::exp(w * logY);
  };
  const cplx integral = parallel
                            ? kernels::vertical_trapezoid_omp(f, contour.real_part, contour.half_length, contour.nodes)
                            : kernels::vertical_trapezoid_serial(f, contour.real_part, contour.half_length,
                                                                 contour.nodes);
  const double tail = neg_log_derivative.tail_bound(s.real() + contour.real_part) *
                      std::exp(contour.real_part * logY) * gamma_line_mass(contour);
  return {series.value(), integral, std::abs(series.value() - integral), tail, neg_log_derivative.prime_limit()};
}

ContourComparison smoothed_series_vs_contour(const forms::FormSpec& form, cplx s, double Y,
                                             const ContourSpec& contour, const Tolerances& tol) {
  contour.validate();
  const double sigma = s.real() + contour.real_part;
  const double scale = std::exp(contour.real_part * std::log(Y)) * gamma_line_mass(contour);
  std::uint64_t P = 1000;
  constexpr std::uint64_t kMaxPrimeLimit = 10'000'000;
  double achieved = 0.0;
  while (true) {
    const double a = sigma - (form.unitary() ? 0.0 : 0.5);
    const double Pd = static_cast<double>(P);
    achieved = a > 1.0 ? form.degree() * std::pow(Pd, 1.0 - a) *
                             (std::log(Pd) / (a - 1.0) + 1.0 / ((a - 1.0) * (a - 1.0))) /
                             (1.0 - std::pow(Pd, -a)) * scale
                       : std::numeric_limits<double>::infinity();
    if (achieved < tol.contour / 10.0) break;
    if (P >= kMaxPrimeLimit) {
      throw NumericError("Euler-product truncation bound not reached for -L'/L on the contour", achieved);
    }
    P = std::min(P * 2, kMaxPrimeLimit);
  }
  const auto table = hecke::build_coefficient_table(form, hard_truncation(Y));
  const auto logderiv = EulerLogDerivative::from_form(form, P);
  return smoothed_series_vs_contour(table, logderiv, s, Y, contour);
}

double jensen_count(const HolomorphicFn& f, const DiscSpec& disc, cplx center_value, const Tolerances& tol) {
  disc.validate();
  if (std::abs(center_value) < 1e-300) throw DomainError("jensen_count: f vanishes (numerically) at the center");

  auto log_abs_at = [&](std::size_t k, std::size_t nodes) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nodes);
    return std::log(std::abs(f(disc.center + std::polar(disc.radius, theta))));
  };
  // Mean of log|f| over the nodes k * stride, k odd-or-all, in a fixed order.
  auto mean_over = [&](std::size_t nodes, std::size_t first, std::size_t step) {
    const std::size_t count = (nodes - first + step - 1) / step;
    std::vector<double> values(count);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      values[static_cast<std::size_t>(i)] = log_abs_at(first + step * static_cast<std::size_t>(i), nodes);
    }
    CompensatedSum<double> acc;
    for (double v : values) acc += v;
    return acc.value() / static_cast<double>(count);
  };

  std::size_t nodes = std::bit_ceil(disc.nodes);
  double mean = mean_over(nodes, 0, 1);
  constexpr std::size_t kMaxNodes = std::size_t{1} << 22;
  while (true) {
    const std::size_t doubled = nodes * 2;
    const double odd_mean = mean_over(doubled, 1, 2);
    const double next = 0.5 * (mean + odd_mean);
    const double change = std::abs(next - mean);
    mean = next;
    nodes = doubled;
    if (change < tol.jensen_convergence) break;
    if (nodes >= kMaxNodes) throw NumericError("jensen_count: angular quadrature did not converge", change);
  }
  return mean - std::log(std::abs(center_value));
}

std::uint64_t zero_count_bound(double jensen_value, double R, double r_inner) {
  if (!(r_inner > 0.0 && r_inner < R)) throw DomainError("zero_count_bound needs 0 < r_inner < R");
  if (!(jensen_value > 0.0)) return 0;
  return static_cast<std::uint64_t>(std::floor(jensen_value / std::log(R / r_inner) + 1e-9));
}

}  // namespace lfmv::analytic
