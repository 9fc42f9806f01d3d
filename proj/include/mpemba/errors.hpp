#pragma once

#include <stdexcept>

namespace mpemba {

/// Graph has more than one communicating class; the stationary state of a
/// Metropolis chain on it is not unique.
class DisconnectedGraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric routine failed to converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scenario file could not be parsed or fails validation.
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mpemba
