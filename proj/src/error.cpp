#include "infmod/error.hpp"

namespace infmod {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_bounds: return "invalid-bounds";
    case ErrorKind::zero_mass: return "zero-mass";
    case ErrorKind::not_normalized: return "not-normalized";
    case ErrorKind::negativity_violation: return "negativity-violation";
    case ErrorKind::grid_too_large: return "grid-too-large";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::order_exceeded: return "order-exceeded";
    case ErrorKind::out_of_table: return "out-of-table";
    case ErrorKind::under_resolved: return "under-resolved";
    case ErrorKind::insufficient_samples: return "insufficient-samples";
    case ErrorKind::nonpositive_values: return "nonpositive-values";
    case ErrorKind::blow_up: return "blow-up";
    case ErrorKind::config_invalid: return "config-invalid";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::consistency: return "consistency";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace infmod
