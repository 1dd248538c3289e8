#pragma once

#include <stdexcept>
#include <string>

namespace swad {

// Base of everything the library throws on bad input or failed numerics.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid argument value (out-of-range k, lo >= hi, single-class labels...).
class ValueError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed dataset / checkpoint file.
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss. The CLI maps this to exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace swad
