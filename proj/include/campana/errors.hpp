#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace campana {

// Process exit codes used by the command-line front end.
enum class ExitCode : int {
  Ok = 0,
  Usage = 2,
  Domain = 3,
  Budget = 4,
  NumericalDisagreement = 5,
};

/// Input lies outside the mathematical domain of an operation
/// (zero valuation argument, non-m-full decomposition input, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact computation would exceed a configured resource cap or the
/// representable integer range. Never silently truncated.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

/// Two independent numerical routes disagree beyond tolerance.
class NumericalDisagreement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by m_full_decompose; carries the prime whose valuation is too small.
class NotMFull : public DomainError {
 public:
  NotMFull(std::int64_t x, int m, std::int64_t witness)
      : DomainError(std::to_string(x) + " is not " + std::to_string(m) +
                    "-full: prime " + std::to_string(witness) +
                    " divides it to a power below " + std::to_string(m)),
        witness_(witness) {}
  std::int64_t witness() const noexcept { return witness_; }

 private:
  std::int64_t witness_;
};

}  // namespace campana
