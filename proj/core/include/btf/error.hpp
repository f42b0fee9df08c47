#pragma once

#include <stdexcept>
#include <string>

namespace btf {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (bad CSV, negative counts, inconsistent split).
class SchemaError : public Error {
public:
  using Error::Error;
};

/// Numerical failure: cell-space explosion, divergent fit.
class NumericError : public Error {
public:
  using Error::Error;
};

/// Raised when the product of cluster counts exceeds the configured cap.
class CellCapExceeded : public NumericError {
public:
  using NumericError::NumericError;
};

/// Invalid experiment or manifest configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace btf
