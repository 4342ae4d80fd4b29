#pragma once

#include <stdexcept>
#include <string>

namespace sis {

/// Bad input: out-of-range index, malformed scenario, invalid knob.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The request is well-formed but exceeds a configured capability
/// (e.g. exact 2^n enumeration above the configured node cap).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sis
