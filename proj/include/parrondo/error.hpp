#pragma once

#include <stdexcept>
#include <string>

namespace parrondo {

/// A value violated a documented precondition or type invariant.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The exact stationary solver could not produce a unique, verified answer.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stopping-game play consumed more letters than the hard cap allows.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace parrondo
