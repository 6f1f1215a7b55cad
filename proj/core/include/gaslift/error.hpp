#pragma once

#include <stdexcept>
#include <string>

namespace gaslift {

// Raised for inputs outside an operation's precondition domain.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The simplex exceeded SimplexConfig::max_iterations.
class IterationLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every early-fixed LP of an instance is infeasible.
class AllInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gaslift
