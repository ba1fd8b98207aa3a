#pragma once

#include <stdexcept>
#include <string>

namespace dsheat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed the configured cell budget.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// Caller broke an operation precondition (e.g. stepping a blown-up state).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A value left the binary64 range in a scheme that has no blow-up semantics.
class NumericOverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsheat
