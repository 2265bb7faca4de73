#pragma once

#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>

namespace lfmv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (pole, limit < 2, duplicate frequency, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or form document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Local data violates a SatakeLocal invariant, or is missing for a prime.
class IngestionError : public Error {
 public:
  IngestionError(const std::string& what, std::uint64_t prime)
      : Error(what), prime_(prime) {}
  std::uint64_t prime() const noexcept { return prime_; }

 private:
  std::uint64_t prime_;
};

/// A coefficient table does not reach the range an experiment needs.
class InsufficientTableError : public Error {
 public:
  InsufficientTableError(std::uint64_t have, std::uint64_t required)
      : Error("coefficient table limit " + std::to_string(have) +
              " is below the required limit M = " + std::to_string(required)),
        have_(have),
        required_(required) {}
  std::uint64_t have() const noexcept { return have_; }
  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t have_;
  std::uint64_t required_;
};

/// Iterative method failed or a truncation bound was not reached.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A request exceeds a configured capacity or exact arithmetic would overflow.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Process exit status for an error escaping the CLI: 2 for configuration and
/// ingestion problems, 3 for numeric/capacity problems.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace lfmv
