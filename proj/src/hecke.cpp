#include "lfmv/hecke.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <utility>

#include "lfmv/arith.hpp"
#include "lfmv/errors.hpp"

namespace lfmv::hecke {

namespace {

std::vector<wide> elementary_wide(const satake::SatakeLocal& s) {
  std::vector<wide> e(s.alphas.size() + 1, wide{});
  e[0] = 1.0L;
  for (std::size_t i = 0; i < s.alphas.size(); ++i) {
    const wide a{s.alphas[i].real(), s.alphas[i].imag()};
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += a * e[j - 1];
  }
  return e;
}

cplx narrow(wide z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

// Determinant by Gaussian elimination with partial pivoting.
wide determinant(std::vector<wide> m, std::size_t n) {
  wide det{1.0L, 0.0L};
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
    }
    if (m[pivot * n + col] == wide{}) return wide{};
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[pivot * n + c], m[col * n + c]);
      det = -det;
    }
    const wide d = m[col * n + col];
    det *= d;
    for (std::size_t r = col + 1; r < n; ++r) {
      const wide f = m[r * n + col] / d;
      if (f == wide{}) continue;
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
    }
  }
  return det;
}

void check_exponents(int degree, std::span<const int> exponents) {
  if (static_cast<int>(exponents.size()) != degree - 1) {
    throw DomainError("expected " + std::to_string(degree - 1) + " exponents, got " +
                      std::to_string(exponents.size()));
  }
  for (int k : exponents) {
    if (k < 0) throw DomainError("exponents must be non-negative");
  }
}

}  // namespace

std::vector<cplx> local_A_powers(const satake::SatakeLocal& s, int kmax) {
  if (kmax < 0) throw DomainError("local_A_powers needs kmax >= 0");
  LocalCoefficients local(s);
  std::vector<cplx> out(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) out[k] = narrow(local.h(k));
  return out;
}

LocalCoefficients::LocalCoefficients(const satake::SatakeLocal& s) : local_(s), e_(elementary_wide(s)) {
  h_.push_back(wide{1.0L, 0.0L});
}

wide LocalCoefficients::h(int k) {
  if (k < 0) return wide{};
  const int n = local_.degree();
  while (static_cast<int>(h_.size()) <= k) {
    const int next = static_cast<int>(h_.size());
    wide acc{};
    for (int j = 1; j <= std::min(next, n); ++j) {
      const wide term = e_[j] * h_[next - j];
      acc += (j % 2 == 1) ? term : -term;
    }
    h_.push_back(acc);
  }
  return h_[k];
}

wide LocalCoefficients::tuple(std::span<const int> exponents) {
  check_exponents(local_.degree(), exponents);
  const std::size_t rows = exponents.size();
  std::vector<int> lambda(rows, 0);
  int suffix = 0;
  for (std::size_t i = rows; i-- > 0;) {
    suffix += exponents[i];
    lambda[i] = suffix;
  }
  std::size_t len = 0;
  while (len < rows && lambda[len] > 0) ++len;
  if (len == 0) return wide{1.0L, 0.0L};
  std::vector<wide> m(len * len);
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = 0; j < len; ++j) {
      m[i * len + j] = h(lambda[i] - static_cast<int>(i) + static_cast<int>(j));
    }
  }
  return determinant(std::move(m), len);
}

TupleCoefficient tuple_coefficient(const satake::SatakeLocal& s, std::span<const int> exponents) {
  LocalCoefficients local(s);
  const cplx v = narrow(local.tuple(exponents));
  return {s.p, std::vector<int>(exponents.begin(), exponents.end()), v};
}

double verify_hecke_relation(LocalCoefficients& local, int a, std::span<const int> exponents) {
  const int n = local.local().degree();
  check_exponents(n, exponents);
  if (a < 0) throw DomainError("verify_hecke_relation needs a >= 0");
  const wide lhs = local.h(a) * local.tuple(exponents);

  // Enumerate (g_1..g_n), sum a, with g_l <= k_l for l < n; c_l = p^{g_l}.
  std::vector<int> g(static_cast<std::size_t>(n), 0);
  std::vector<int> shifted(exponents.size());
  wide rhs{};
  auto emit = [&] {
    // slot 1: k_1 + g_n - g_1; slot l: k_l + g_{l-1} - g_l
    shifted[0] = exponents[0] + g[n - 1] - g[0];
    for (int l = 1; l < n - 1; ++l) shifted[l] = exponents[l] + g[l - 1] - g[l];
    rhs += local.tuple(shifted);
  };
  auto recurse = [&](auto&& self, int slot, int remaining) -> void {
    if (slot == n - 1) {
      g[slot] = remaining;
      emit();
      return;
    }
    for (int v = 0; v <= std::min(remaining, exponents[slot]); ++v) {
      g[slot] = v;
      self(self, slot + 1, remaining - v);
    }
  };
  recurse(recurse, 0, a);
  return static_cast<double>(std::abs(lhs - rhs));
}

double verify_hecke_relation(const satake::SatakeLocal& s, std::uint64_t m, std::span<const int> exponents) {
  int a = 0;
  while (m > 1) {
    if (m % s.p != 0) {
      throw DomainError("verify_hecke_relation: m is not a power of p=" + std::to_string(s.p));
    }
    m /= s.p;
    ++a;
  }
  if (m == 0) throw DomainError("verify_hecke_relation needs m >= 1");
  LocalCoefficients local(s);
  return verify_hecke_relation(local, a, exponents);
}

double dual_symmetry_check(LocalCoefficients& local, std::span<const int> exponents) {
  std::vector<int> reversed(exponents.rbegin(), exponents.rend());
  return static_cast<double>(std::abs(local.tuple(reversed) - std::conj(local.tuple(exponents))));
}

double dual_symmetry_check(const satake::SatakeLocal& s, std::span<const int> exponents) {
  LocalCoefficients local(s);
  return dual_symmetry_check(local, exponents);
}

CoefficientTable::CoefficientTable(std::string form_id, int degree, std::uint64_t limit, std::vector<cplx> A,
                                   std::vector<cplx> lambda)
    : form_id_(std::move(form_id)), degree_(degree), limit_(limit), A_(std::move(A)), lambda_(std::move(lambda)) {
  if (A_.size() != limit_ + 1 || lambda_.size() != limit_ + 1) {
    throw DomainError("coefficient table vectors must have limit + 1 entries");
  }
}

CoefficientTable CoefficientTable::zero(std::uint64_t limit, int degree) {
  std::vector<cplx> A(limit + 1, cplx{});
  if (limit >= 1) A[1] = 1.0;
  return {"zero", degree, limit, std::move(A), std::vector<cplx>(limit + 1, cplx{})};
}

CoefficientTable build_coefficient_table(const forms::FormSpec& form, std::uint64_t M, bool parallel,
                                         const Limits& limits) {
  if (M < 1) throw DomainError("coefficient table limit must be >= 1");
  if (M > limits.table_cap) {
    throw CapacityError("coefficient table limit " + std::to_string(M) + " exceeds cap " +
                        std::to_string(limits.table_cap));
  }
  std::vector<cplx> A(M + 1, cplx{});
  std::vector<cplx> lambda(M + 1, cplx{});
  A[1] = 1.0;
  if (M < 2) return {form.id(), form.degree(), M, std::move(A), std::move(lambda)};

  const auto primes = arith::sieve_primes(M, limits);
  form.prepare(M);
  const auto ps = primes.primes();
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(ps.size());

  // First failing prime (smallest), so the reported error is deterministic.
  std::uint64_t failed_prime = std::numeric_limits<std::uint64_t>::max();
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const std::uint64_t p = ps[static_cast<std::size_t>(i)];
    try {
      const auto local = form.local(p);
      int kmax = 0;
      for (std::uint64_t q = p; q <= M; q *= p) {
        ++kmax;
        if (q > M / p) break;
      }
      const auto h = local_A_powers(local, kmax);
      const double logp = std::log(static_cast<double>(p));
      std::uint64_t q = p;
      for (int k = 1; k <= kmax; ++k, q *= p) {
        A[q] = h[k];
        lambda[q] = logp * satake::power_sum(local, k).value;
      }
    } catch (...) {
#pragma omp critical(lfmv_table_failure)
      if (p < failed_prime) {
        failed_prime = p;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  const arith::FactorSieve sieve(M);
  const std::ptrdiff_t top = static_cast<std::ptrdiff_t>(M);
#pragma omp parallel for schedule(static, 4096) if (parallel)
  for (std::ptrdiff_t m = 2; m <= top; ++m) {
    const auto um = static_cast<std::uint64_t>(m);
    const std::uint64_t p = sieve.smallest_factor(um);
    std::uint64_t pe = 1;
    std::uint64_t rest = um;
    while (rest % p == 0) {
      rest /= p;
      pe *= p;
    }
    if (rest == 1) continue;  // prime power, already set
    cplx value = A[pe];
    while (rest > 1) {
      const std::uint64_t q = sieve.smallest_factor(rest);
      std::uint64_t qe = 1;
      while (rest % q == 0) {
        rest /= q;
        qe *= q;
      }
      value *= A[qe];
    }
    A[um] = value;
  }
  return {form.id(), form.degree(), M, std::move(A), std::move(lambda)};
}

}  // namespace lfmv::hecke
