#include "lfmv/satake.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "lfmv/errors.hpp"

namespace lfmv::satake {

namespace {

cplx int_power(cplx z, int r) {
  cplx out{1.0, 0.0};
  while (r > 0) {
    if (r & 1) out *= z;
    z *= z;
    r >>= 1;
  }
  return out;
}

}  // namespace

double product_defect(const SatakeLocal& s) {
  cplx prod{1.0, 0.0};
  for (auto a : s.alphas) prod *= a;
  return std::abs(prod - 1.0);
}

double multiset_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (auto x : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

double conjugation_defect(const SatakeLocal& s) {
  std::vector<cplx> conj(s.alphas.size());
  std::transform(s.alphas.begin(), s.alphas.end(), conj.begin(), [](cplx z) { return std::conj(z); });
  return multiset_distance(s.alphas, conj);
}

void validate(const SatakeLocal& s, bool self_dual, const Tolerances& tol) {
  const auto where = " at p=" + std::to_string(s.p);
  if (s.alphas.empty()) throw IngestionError("empty Satake data" + where, s.p);
  for (auto a : s.alphas) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw IngestionError("non-finite Satake root" + where, s.p);
    }
  }
  if (const double d = product_defect(s); d > tol.invariant) {
    throw IngestionError("product of Satake roots differs from 1 by " + std::to_string(d) + where, s.p);
  }
  if (self_dual) {
    if (const double d = conjugation_defect(s); d > tol.invariant) {
      throw IngestionError("Satake roots not closed under conjugation (defect " + std::to_string(d) + ")" +
                               where,
                           s.p);
    }
  }
}

void validate(const HeckeEigenvalueVector& h, bool self_dual, const Tolerances& tol) {
  if (!self_dual) return;
  const std::size_t n = h.values.size() + 1;
  for (std::size_t j = 1; j < n; ++j) {
    const double d = std::abs(h.values[j - 1] - std::conj(h.values[n - j - 1]));
    if (d > tol.invariant) {
      throw IngestionError("Hecke eigenvalues violate dual symmetry in slot " + std::to_string(j) +
                               " at p=" + std::to_string(h.p),
                           h.p);
    }
  }
}

std::vector<cplx> elementary_symmetric(std::span<const cplx> values) {
  std::vector<cplx> e(values.size() + 1, cplx{});
  e[0] = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += values[i] * e[j - 1];
  }
  return e;
}

std::vector<cplx> hecke_polynomial(const HeckeEigenvalueVector& h) {
  const int n = h.degree();
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
  c[n] = 1.0;
  for (int j = 1; j < n; ++j) c[n - j] = (j % 2 == 0 ? 1.0 : -1.0) * h.values[j - 1];
  c[0] = (n % 2 == 0) ? 1.0 : -1.0;
  return c;
}

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs, const Tolerances& tol, int max_iterations) {
  const std::size_t n = coeffs.size() - 1;
  if (coeffs.size() < 2 || coeffs[n] != cplx{1.0, 0.0}) {
    throw DomainError("polynomial_roots expects a monic polynomial of degree >= 1");
  }
  double max_coeff = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_coeff = std::max(max_coeff, std::abs(coeffs[i]));

  // p(z), p'(z), and a running-error bound for |p(z)| from Horner.
  struct Eval {
    cplx value, deriv;
    double rounding;
  };
  auto evaluate = [&](cplx z) {
    cplx v = coeffs[n], d{};
    double mag = std::abs(coeffs[n]);
    const double az = std::abs(z);
    for (std::size_t i = n; i-- > 0;) {
      d = d * z + v;
      v = v * z + coeffs[i];
      mag = mag * az + std::abs(coeffs[i]);
    }
    return Eval{v, d, 8.0 * std::numeric_limits<double>::epsilon() * mag};
  };

  const double radius = 1.0 + max_coeff;
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = std::polar(radius, angle);
  }
  std::vector<bool> done(n, false);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool all_done = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      const auto e = evaluate(z[k]);
      if (std::abs(e.value) <= e.rounding) {
        done[k] = true;
        continue;
      }
      all_done = false;
      if (e.deriv == cplx{}) {
        z[k] *= cplx{1.0 + 1e-8, 1e-8};
        continue;
      }
      const cplx ratio = e.value / e.deriv;
      cplx repulsion{};
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z[k])) done[k] = true;
    }
    if (all_done) break;
  }
  // Aberth freezes each copy of an m-fold root somewhere in a rounding ball of
  // radius ~eps^{1/m}. For a tight cluster, Newton on the (m-1)-th derivative
  // (which has a simple root there) started from the centroid recovers the
  // multiple root; keep the result only if it evaluates no worse.
  const double cluster_radius = 1e-3;
  std::vector<bool> grouped(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (grouped[k]) continue;
    std::vector<std::size_t> members{k};
    for (std::size_t j = k + 1; j < n; ++j) {
      if (!grouped[j] && std::abs(z[j] - z[k]) <= cluster_radius * (1.0 + std::abs(z[k]))) members.push_back(j);
    }
    if (members.size() < 2) continue;
    cplx w{};
    double worst = 0.0;
    for (auto j : members) {
      w += z[j];
      worst = std::max(worst, std::abs(evaluate(z[j]).value));
    }
    w /= static_cast<double>(members.size());
    std::vector<cplx> d(coeffs.begin(), coeffs.end());
    for (std::size_t order = 1; order < members.size(); ++order) {
      for (std::size_t i = 1; i < d.size(); ++i) d[i - 1] = d[i] * static_cast<double>(i);
      d.pop_back();
    }
    for (int iter = 0; iter < 50; ++iter) {
      cplx v = d.back(), dv{};
      for (std::size_t i = d.size() - 1; i-- > 0;) {
        dv = dv * w + v;
        v = v * w + d[i];
      }
      if (dv == cplx{}) break;
      const cplx step = v / dv;
      w -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
    }
    if (std::abs(evaluate(w).value) <= std::max(worst, evaluate(w).rounding)) {
      for (auto j : members) {
        z[j] = w;
        grouped[j] = true;
      }
    }
  }
  double residual = 0.0;
  for (auto root : z) residual = std::max(residual, std::abs(evaluate(root).value));
  residual /= (1.0 + max_coeff);
  if (!(residual <= tol.root_residual)) {
    throw NumericError("Aberth iteration did not converge in " + std::to_string(max_iterations) + " steps",
                       residual);
  }
  return z;
}

SatakeLocal alphas_from_hecke(const HeckeEigenvalueVector& h, const Tolerances& tol) {
  if (h.values.empty()) return {h.p, {cplx{1.0, 0.0}}};
  const auto c = hecke_polynomial(h);
  return {h.p, polynomial_roots(c, tol)};
}

HeckeEigenvalueVector hecke_from_alphas(const SatakeLocal& s) {
  const auto e = elementary_symmetric(s.alphas);
  HeckeEigenvalueVector h{s.p, {}};
  for (int j = 1; j < s.degree(); ++j) h.values.push_back(e[j]);
  return h;
}

PowerSum power_sum(const SatakeLocal& s, int r) {
  if (r < 1) throw DomainError("power_sum needs r >= 1");
  cplx direct{};
  double scale = 0.0;
  for (auto a : s.alphas) {
    direct += int_power(a, r);
    scale += std::pow(std::abs(a), r);
  }
  // Newton: p_k = sum_{j=1}^{k-1} (-1)^{j-1} e_j p_{k-j} + (-1)^{k-1} k e_k, e_j = 0 for j > n.
  const auto e = elementary_symmetric(s.alphas);
  const int n = s.degree();
  std::vector<cplx> ps(static_cast<std::size_t>(r) + 1);
  for (int k = 1; k <= r; ++k) {
    cplx acc{};
    for (int j = 1; j < k && j <= n; ++j) acc += ((j - 1) % 2 == 0 ? 1.0 : -1.0) * e[j] * ps[k - j];
    if (k <= n) acc += ((k - 1) % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(k) * e[k];
    ps[k] = acc;
  }
  return {direct, ps[r], std::abs(direct - ps[r]) / std::max(1.0, scale)};
}

ThetaBound theta_bound(int n) {
  if (n < 2) throw DomainError("theta_bound needs n >= 2, got " + std::to_string(n));
  switch (n) {
    case 2:
      return {2, 7, 64};
    case 3:
      return {3, 5, 14};
    case 4:
      return {4, 9, 22};
    default: {
      // 1/2 - 1/(n^2+1) = (n^2 - 1) / (2(n^2 + 1))
      const long sq = static_cast<long>(n) * n;
      const long g = std::gcd(sq - 1, 2 * (sq + 1));
      return {n, (sq - 1) / g, 2 * (sq + 1) / g};
    }
  }
}

BoundCheck check_bound(const SatakeLocal& s, double theta, double slack) {
  BoundCheck out{true, 0, 0.0};
  for (std::size_t i = 0; i < s.alphas.size(); ++i) {
    const double m = std::abs(s.alphas[i]);
    if (m > out.worst_magnitude) {
      out.worst_magnitude = m;
      out.worst_index = i;
    }
  }
  out.holds = out.worst_magnitude <= std::pow(static_cast<double>(s.p), theta) * (1.0 + slack);
  return out;
}

}  // namespace lfmv::satake
