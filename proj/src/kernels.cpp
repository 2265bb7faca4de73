#include "lfmv/kernels.hpp"

#include <cmath>
#include <numbers>

#include "lfmv/compensated.hpp"
#include "lfmv/errors.hpp"

namespace lfmv::kernels {

namespace {

void check_headroom(std::span<const i128> dense, std::span<const SparseTerm> sparse) {
  double max_dense = 0.0;
  for (auto v : dense) max_dense = std::max(max_dense, std::abs(static_cast<double>(v)));
  double coeff_mass = 0.0;
  for (const auto& t : sparse) coeff_mass += std::abs(static_cast<double>(t.coeff));
  // 2^127 ~ 1.7e38; keep an order of magnitude in reserve for rounding in the estimate.
  if (max_dense * coeff_mass > 1e37) {
    throw CapacityError("power-series coefficients would overflow 128-bit arithmetic");
  }
}

// 2 Re[a_i conj(a_j) * (e^{2iTL} - e^{iTL}) / (iL)], L = log(f_j/f_i), written as
// 2 sin(TL/2)/L * e^{3iTL/2} to avoid cancellation for small TL.
inline double pair_term(std::uint64_t fi, std::uint64_t fj, cplx ai, cplx aj, double T) {
  const double L = std::log1p(static_cast<double>(fj - fi) / static_cast<double>(fi));
  const double mag = 2.0 * std::sin(0.5 * T * L) / L;
  const cplx phase = std::polar(1.0, 1.5 * T * L);
  return 2.0 * (ai * std::conj(aj) * phase).real() * mag;
}

}  // namespace

std::vector<i128> sparse_multiply_serial(std::span<const i128> dense, std::span<const SparseTerm> sparse) {
  check_headroom(dense, sparse);
  std::vector<i128> out(dense.size(), 0);
  for (const auto& t : sparse) {
    for (std::size_t k = t.degree; k < dense.size(); ++k) out[k] += dense[k - t.degree] * t.coeff;
  }
  return out;
}

std::vector<i128> sparse_multiply_omp(std::span<const i128> dense, std::span<const SparseTerm> sparse) {
  check_headroom(dense, sparse);
  const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(dense.size());
  std::vector<i128> out(dense.size(), 0);
#pragma omp parallel for schedule(static, 4096)
  for (std::ptrdiff_t k = 0; k < size; ++k) {
    i128 acc = 0;
    for (const auto& t : sparse) {
      if (t.degree > static_cast<std::size_t>(k)) break;
      acc += dense[static_cast<std::size_t>(k) - t.degree] * t.coeff;
    }
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

double offdiag_serial(std::span<const std::uint64_t> freqs, std::span<const cplx> coeffs, double T,
                      std::optional<std::uint64_t> band) {
  CompensatedSum<double> total;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    for (std::size_t j = i + 1; j < freqs.size(); ++j) {
      if (band && freqs[j] - freqs[i] > *band) break;
      total += pair_term(freqs[i], freqs[j], coeffs[i], coeffs[j], T);
    }
  }
  return total.value();
}

double offdiag_omp(std::span<const std::uint64_t> freqs, std::span<const cplx> coeffs, double T,
                   std::optional<std::uint64_t> band) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(freqs.size());
  std::vector<double> rows(freqs.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    CompensatedSum<double> row;
    const auto ui = static_cast<std::size_t>(i);
    for (std::size_t j = ui + 1; j < freqs.size(); ++j) {
      if (band && freqs[j] - freqs[ui] > *band) break;
      row += pair_term(freqs[ui], freqs[j], coeffs[ui], coeffs[j], T);
    }
    rows[ui] = row.value();
  }
  CompensatedSum<double> total;
  for (double r : rows) total += r;
  return total.value();
}

namespace {

inline double trapezoid_weight(std::size_t k, std::size_t nodes) { return (k == 0 || k + 1 == nodes) ? 0.5 : 1.0; }

inline double simpson_weight(std::size_t k, std::size_t intervals) {
  if (k == 0 || k == intervals) return 1.0;
  return (k % 2 == 1) ? 4.0 : 2.0;
}

void check_nodes(std::size_t nodes) {
  if (nodes < 2) throw DomainError("quadrature needs at least two nodes");
}

void check_intervals(std::size_t intervals) {
  if (intervals < 2 || intervals % 2 != 0) throw DomainError("Simpson rule needs an even interval count");
}

}  // namespace

cplx vertical_trapezoid_serial(const LineIntegrand& f, double c, double V, std::size_t nodes) {
  check_nodes(nodes);
  const double h = 2.0 * V / static_cast<double>(nodes - 1);
  CompensatedSum<cplx> acc;
  for (std::size_t k = 0; k < nodes; ++k) {
    const double v = -V + h * static_cast<double>(k);
    acc += trapezoid_weight(k, nodes) * f(cplx{c, v});
  }
  return acc.value() * (h / (2.0 * std::numbers::pi));
}

cplx vertical_trapezoid_omp(const LineIntegrand& f, double c, double V, std::size_t nodes) {
  check_nodes(nodes);
  const double h = 2.0 * V / static_cast<double>(nodes - 1);
  std::vector<cplx> values(nodes);
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(nodes);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const double v = -V + h * static_cast<double>(k);
    values[static_cast<std::size_t>(k)] = f(cplx{c, v});
  }
  CompensatedSum<cplx> acc;
  for (std::size_t k = 0; k < nodes; ++k) acc += trapezoid_weight(k, nodes) * values[k];
  return acc.value() * (h / (2.0 * std::numbers::pi));
}

double simpson_serial(const std::function<double(double)>& g, double a, double b, std::size_t intervals) {
  check_intervals(intervals);
  const double h = (b - a) / static_cast<double>(intervals);
  CompensatedSum<double> acc;
  for (std::size_t k = 0; k <= intervals; ++k) acc += simpson_weight(k, intervals) * g(a + h * static_cast<double>(k));
  return acc.value() * h / 3.0;
}

double simpson_omp(const std::function<double(double)>& g, double a, double b, std::size_t intervals) {
  check_intervals(intervals);
  const double h = (b - a) / static_cast<double>(intervals);
  std::vector<double> values(intervals + 1);
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(intervals + 1);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) values[static_cast<std::size_t>(k)] = g(a + h * static_cast<double>(k));
  CompensatedSum<double> acc;
  for (std::size_t k = 0; k <= intervals; ++k) acc += simpson_weight(k, intervals) * values[k];
  return acc.value() * h / 3.0;
}

}  // namespace lfmv::kernels
