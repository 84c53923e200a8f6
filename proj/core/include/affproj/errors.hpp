#pragma once

#include <stdexcept>
#include <string>

namespace affproj {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Raised when a projection target (a row-constraint set or an intersection
// of hyperplanes) turns out to be empty within tolerance.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOracleError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace affproj
