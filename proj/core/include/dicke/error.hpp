#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Invalid parameters or malformed input. Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that could not be completed to the required accuracy
// (eigensolver failure, Fourier cutoff violation, non-unique stationary
// state, ...). Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dicke
