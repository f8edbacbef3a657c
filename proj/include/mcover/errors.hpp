#pragma once

#include <stdexcept>
#include <string>

namespace mcover {

// A brute-force or enumeration bound was exceeded.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver exhausted its guesses or hit a numerical failure.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcover
