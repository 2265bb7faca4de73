// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "lfmv/kernels.hpp"

namespace {

using namespace lfmv::kernels;

std::vector<i128> dense_series(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> d(-1000000, 1000000);
  std::vector<i128> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Same shape as the Jacobi factor used for tau: triangular-number support.
std::vector<SparseTerm> jacobi_terms(std::size_t n) {
  std::vector<SparseTerm> s;
  for (std::int64_t k = 0;; ++k) {
    const auto deg = static_cast<std::size_t>(k * (k + 1) / 2);
    if (deg >= n) break;
    s.push_back({deg, (k % 2 == 0 ? 1 : -1) * (2 * k + 1)});
  }
  return s;
}

struct Poly {
  std::vector<std::uint64_t> f;
  std::vector<cplx> a;
};

Poly polynomial(std::size_t terms) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly p;
  for (std::size_t i = 0; i < terms; ++i) {
    p.f.push_back(2 * i + 1);
    p.a.emplace_back(u(rng), u(rng));
  }
  return p;
}

template <auto Kernel>
void BM_sparse_multiply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto dense = dense_series(n);
  const auto sparse = jacobi_terms(n);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(dense, sparse));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * sparse.size()));
}

template <auto Kernel>
void BM_offdiag(benchmark::State& state) {
  const auto p = polynomial(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(p.f, p.a, 1000.0, std::nullopt));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <auto Kernel>
void BM_trapezoid(benchmark::State& state) {
  const LineIntegrand f = [](cplx w) { return std::exp(w * w) / (w + 3.0); };
  const auto nodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f, 2.0, 40.0, nodes));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_simpson(benchmark::State& state) {
  const auto g = [](double t) { return std::cos(t * std::log(t)) / t; };
  const auto intervals = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(g, 100.0, 200.0, intervals));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_sparse_multiply<sparse_multiply_serial>)->Name("sparse_multiply/serial")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_sparse_multiply<sparse_multiply_omp>)->Name("sparse_multiply/omp")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_offdiag<offdiag_serial>)->Name("offdiag/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_offdiag<offdiag_omp>)->Name("offdiag/omp")->Arg(500)->Arg(2000);
BENCHMARK(BM_trapezoid<vertical_trapezoid_serial>)->Name("trapezoid/serial")->Arg(4000)->Arg(64000);
BENCHMARK(BM_trapezoid<vertical_trapezoid_omp>)->Name("trapezoid/omp")->Arg(4000)->Arg(64000);
BENCHMARK(BM_simpson<simpson_serial>)->Name("simpson/serial")->Arg(4000)->Arg(64000);
BENCHMARK(BM_simpson<simpson_omp>)->Name("simpson/omp")->Arg(4000)->Arg(64000);

BENCHMARK_MAIN();
