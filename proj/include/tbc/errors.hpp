#pragma once

#include <stdexcept>

namespace tbc {

// Invalid physical parameters (F <= 0, tau <= 0, ...).
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Support of a state reaches the edge of the truncated lattice window, or
// mass transformed out of the window exceeds the leakage budget.
class WindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A table or expansion cannot reach the requested accuracy.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative solver failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Brute-force reservoir computation exceeds the memory budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tbc
