#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace weilrad {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or operands that do not belong together
/// (e.g. elements of different algebras).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// The requested construction is only defined in characteristic 2.
class UnsupportedCharacteristic : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of the class theorem is not met, so no prediction is made.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// The group has no non-trivial commutator witness of the requested shape.
class NoWitness : public Error {
 public:
  using Error::Error;
};

/// Internal consistency failure; indicates a bug rather than bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused. The group order is always a power
/// of the coefficient field size, so it is reported exactly as
/// field_size^exponent.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t field_size, std::uint64_t exponent,
                 std::uint64_t budget)
      : Error(describe(field_size, exponent, budget)),
        field_size_(field_size),
        exponent_(exponent),
        budget_(budget) {}

  std::uint64_t field_size() const { return field_size_; }
  std::uint64_t exponent() const { return exponent_; }
  std::uint64_t budget() const { return budget_; }

 private:
  static std::string describe(std::uint64_t field_size, std::uint64_t exponent,
                              std::uint64_t budget) {
    std::string count = std::to_string(field_size) + "^" + std::to_string(exponent);
    // Print the decimal value too when it fits in 64 bits.
    unsigned __int128 value = 1;
    bool fits = true;
    for (std::uint64_t i = 0; i < exponent && fits; ++i) {
      value *= field_size;
      if (value > UINT64_MAX) fits = false;
    }
    if (fits) count += " = " + std::to_string(static_cast<std::uint64_t>(value));
    return "enumeration budget exceeded: group has " + count +
           " elements, budget is " + std::to_string(budget);
  }

  std::uint64_t field_size_;
  std::uint64_t exponent_;
  std::uint64_t budget_;
};

}  // namespace weilrad
