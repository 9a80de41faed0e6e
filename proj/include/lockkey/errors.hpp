#pragma once

#include <stdexcept>
#include <string>

namespace lockkey {

/// Bad user-supplied value (negative size, non-finite distance, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller broke an API precondition (grid mismatch, repeated mode index, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A request would exceed a configured resource cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical routine failed; the message carries diagnostics.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lockkey
