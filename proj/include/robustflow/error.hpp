#pragma once

#include <stdexcept>
#include <string>

namespace robustflow {

/// Raised for malformed, inconsistent, or infeasible user input. Everything
/// else that escapes a solver is an internal error.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace robustflow
