#pragma once

#include <stdexcept>
#include <string>

namespace bcm {

// Error categories map one-to-one onto CLI exit codes (see tools/bcm.cpp).

/// Invalid hyperparameters, chain settings or command usage.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Objects whose dimensions disagree (state vs dataset, counts vs state).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite scores or probabilities.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation preconditions (missing labels, single class).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bcm
