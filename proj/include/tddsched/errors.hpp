#pragma once

#include <stdexcept>
#include <string>

namespace tddsched {

// Bad user input to an operation (non-positive demand, negative weight, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid scenario or solver configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A bookkeeping invariant was broken by the caller (e.g. over-delivery).
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tddsched
