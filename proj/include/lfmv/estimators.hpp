#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lfmv/config.hpp"
#include "lfmv/forms.hpp"
#include "lfmv/hecke.hpp"
#include "lfmv/mean_value.hpp"
#include "lfmv/report.hpp"

namespace lfmv::est {

/// Assertion constants. These are policy: the statements being tested hide their constants.
struct Policy {
  double lemma5_constant = 1.0;
  double lemma5_min_Y = 100.0;
  double lemma6_factor = 5.0;    // times n^2
  double lemma6_growth = 2.0;    // per grid step
  double theorem2_factor = 10.0; // times n^2
  double theorem2_growth = 1.5;  // per decade of T
  double mv_constant = 3.14159265358979323846 * 3.0;
  double oracle_envelope = 0.2;
  double oracle_node_change = 0.01;
  double theorem2_min_Y = 10.0;
};

/// sum_{m > (Y/2)(log Y)^2} m |Lambda_f(m)|^2 e^{-2m/Y} m^{-2 sigma0}, up to the hard truncation.
ExperimentReport lemma5_tail(const hecke::CoefficientTable& table, double sigma0, double Y, const Policy& policy = {});

/// sum_{m <= (Y/2)(log Y)^2} |Lambda_f(m)|^2 e^{-2m/Y} m^{-2 sigma0} against (log Y)^2.
ExperimentReport lemma6_head(const hecke::CoefficientTable& table, double sigma0, double Y, const Policy& policy = {});

/// One report per Y; each point after the first is flagged against its predecessor
/// (tail sums: non-increasing; head ratios: growth at most policy.lemma6_growth).
std::vector<ExperimentReport> lemma5_grid(const hecke::CoefficientTable& table, double sigma0,
                                          std::span<const double> ygrid, const Policy& policy = {});
std::vector<ExperimentReport> lemma6_grid(const hecke::CoefficientTable& table, double sigma0,
                                          std::span<const double> ygrid, const Policy& policy = {});

/// Largest table limit the Y grid needs.
std::uint64_t table_limit_for(std::span<const double> ygrid);

/// sum_{r=2}^{rmax} sum_{p<=P} (log p)^2 |a_f(p^r)|^2 p^{-r} against
/// n^2 sum_{p<=P} (log p)^2 / (p^{1/2+2 eps1} (p^{1/2+2 eps1} - 1)).
/// A form with some |alpha| > p^{1/4 - eps1} gets a failed, non-asserted hypothesis flag.
ExperimentReport theorem1_majorant(const forms::FormSpec& form, double eps1, std::uint64_t P, int rmax);
/// One report per (P, rmax), reusing a single pass over the primes.
std::vector<ExperimentReport> theorem1_grid(const forms::FormSpec& form, double eps1, std::span<const std::uint64_t> pgrid,
                                            std::span<const int> rgrid);

/// Per r in 2..rmax, partial sums over p <= P for each P in the grid, and the increment
/// between consecutive P against the integral-test bound (asserted for unitary forms).
std::vector<ExperimentReport> rudnick_sarnak_partial(const forms::FormSpec& form, std::span<const std::uint64_t> pgrid,
                                                     int rmax);

/// The smoothed proxy for -L'/L(sigma0 + it).
mv::DirichletPolynomial smoothed_logderiv_polynomial(const hecke::CoefficientTable& table, double sigma0, double Y);

/// max(policy.theorem2_min_Y, exp((log T)^eta)).
double theorem2_Y(double T, double eta, const Policy& policy = {});

ExperimentReport theorem2_experiment(const hecke::CoefficientTable& table, double T, double sigma0, double eta,
                                     const Policy& policy = {}, bool parallel = true);
ExperimentReport theorem2_experiment(const forms::FormSpec& form, double T, double sigma0, double eta,
                                     const Policy& policy = {}, bool parallel = true);
/// Points after the first are flagged for ratio growth beyond policy.theorem2_growth per decade.
std::vector<ExperimentReport> theorem2_grid(const hecke::CoefficientTable& table, std::span<const double> tgrid,
                                            double sigma0, double eta, const Policy& policy = {}, bool parallel = true,
                                            std::uint64_t seed = 0);
/// Largest table limit the T grid needs.
std::uint64_t theorem2_table_limit(std::span<const double> tgrid, double eta, const Policy& policy = {});
std::vector<ExperimentReport> theorem2_grid(const forms::FormSpec& form, std::span<const double> tgrid, double sigma0,
                                            double eta, const Policy& policy = {}, bool parallel = true);

/// Simpson quadrature of |n zeta'/zeta(sigma0+it)|^2 over [T, 2T] against the all-ones proxy.
ExperimentReport zeta_oracle_crosscheck(int n, double T, double sigma0, std::size_t nodes, double eta = 0.4,
                                        const Policy& policy = {});

/// |L_f(2+it)| by the Euler product over p <= P, with the omitted-prime tail.
ExperimentReport line2_sandwich(const forms::FormSpec& form, double t, std::uint64_t P);

/// Random-polynomial sweep: max |offdiag| / sum m|a_m|^2 over `samples` polynomials and each T,
/// plus the near-resonant pair {N, N+1}.
ExperimentReport mv_experiment(std::size_t samples, std::uint64_t seed, std::span<const double> tvalues,
                               const Policy& policy = {});

enum class Suite { hecke, satake, dual };
/// "hecke" | "satake" | "dual"; ConfigError otherwise.
Suite parse_suite(std::string_view name);

/// Local consistency checks at every prime p <= prime_limit:
///   hecke  - convolution relation for m = p^a (a <= 3) and all exponent tuples with entries <= 3;
///   satake - root invariants, Hecke <-> Satake round trip, Newton cross-check for r <= 10;
///   dual   - A(reversed exponents) = conj A(exponents) for all tuples with entries <= 3.
ExperimentReport verify_suite(const forms::FormSpec& form, Suite suite, std::uint64_t prime_limit,
                              const Tolerances& tol = {});

}  // namespace lfmv::est
