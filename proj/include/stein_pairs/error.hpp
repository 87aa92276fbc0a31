#pragma once

#include <stdexcept>
#include <string>

namespace stein_pairs {

// Bad caller input: parameters, spec strings, schema mismatches.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A drift function violates one of the hypotheses required for the limit law.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotNormalizableError : public NumericError {
 public:
  explicit NotNormalizableError(const std::string& what)
      : NumericError("density not normalizable: " + what) {}
};

}  // namespace stein_pairs
