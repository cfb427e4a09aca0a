#pragma once

#include <stdexcept>
#include <string>

namespace infmod {

enum class ErrorKind {
  invalid_bounds,
  zero_mass,
  not_normalized,
  negativity_violation,
  grid_too_large,
  grid_mismatch,
  order_exceeded,
  out_of_table,
  under_resolved,
  insufficient_samples,
  nonpositive_values,
  blow_up,
  config_invalid,
  precondition,
  consistency,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` carries the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace infmod
