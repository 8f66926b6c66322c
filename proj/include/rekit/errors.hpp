#pragma once

#include <stdexcept>
#include <string>

namespace rekit {

/// Invalid or malformed input (bad matrix entries, dimension mismatch, ...).
struct input_error : std::invalid_argument {
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed to converge or hit an ill-conditioned case.
/// `partial` optionally carries diagnostic state (e.g. the partially reduced
/// matrix of a stalled QR iteration) for post-mortem inspection.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what, std::string partial = {})
      : std::runtime_error(what), partial_state(std::move(partial)) {}
  std::string partial_state;
};

}  // namespace rekit
