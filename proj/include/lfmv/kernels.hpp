#pragma once

// Data-parallel kernels. Each has a plain serial reference used by tests and
// the benchmark; the OpenMP variants reduce in a fixed order so their output
// does not depend on the thread count.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace lfmv::kernels {

using cplx = std::complex<double>;
using i128 = __int128;

struct SparseTerm {
  std::size_t degree;
  std::int64_t coeff;
};

/// (dense * sparse) truncated to dense.size() coefficients, exact.
/// Throws CapacityError if a coefficient could leave the 128-bit range.
std::vector<i128> sparse_multiply_serial(std::span<const i128> dense, std::span<const SparseTerm> sparse);
std::vector<i128> sparse_multiply_omp(std::span<const i128> dense, std::span<const SparseTerm> sparse);

/// sum_{i != j} a_i conj(a_j) int_T^{2T} (f_j / f_i)^{it} dt for strictly
/// increasing frequencies f. With `band`, pairs with f_j - f_i > band are skipped
/// (approximate; profiling only).
double offdiag_serial(std::span<const std::uint64_t> freqs, std::span<const cplx> coeffs, double T,
                      std::optional<std::uint64_t> band = std::nullopt);
double offdiag_omp(std::span<const std::uint64_t> freqs, std::span<const cplx> coeffs, double T,
                   std::optional<std::uint64_t> band = std::nullopt);

using LineIntegrand = std::function<cplx(cplx)>;

/// (1/2pi) int_{-V}^{V} f(c + iv) dv by the trapezoid rule on `nodes` points.
cplx vertical_trapezoid_serial(const LineIntegrand& f, double c, double V, std::size_t nodes);
cplx vertical_trapezoid_omp(const LineIntegrand& f, double c, double V, std::size_t nodes);

/// Composite Simpson rule for int_a^b g(t) dt with an even number of intervals.
double simpson_serial(const std::function<double(double)>& g, double a, double b, std::size_t intervals);
double simpson_omp(const std::function<double(double)>& g, double a, double b, std::size_t intervals);

}  // namespace lfmv::kernels
