#pragma once

#include <stdexcept>
#include <string>

namespace rpma {

// Malformed or inconsistent input data (CSV parse failures, dimension
// mismatches between files, degenerate datasets).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown during a solve (non-finite objective, failed step).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rpma
