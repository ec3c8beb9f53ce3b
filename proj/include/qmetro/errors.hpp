#pragma once

#include <stdexcept>
#include <string>

namespace qmetro {

/// Invalid construction parameters, malformed specs, out-of-range inputs.
/// CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failures: ill-defined SLD or estimator (rank changing with the
/// phase), degenerate probes, and similar. CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmetro
