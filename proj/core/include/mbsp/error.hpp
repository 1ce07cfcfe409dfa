#pragma once

#include <stdexcept>
#include <string>

namespace mbsp {

// Root of all library errors. The CLI maps InputError/FormatError to exit
// code 2 and NumericError to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A distribution or model parameter outside its valid domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A factorization or numeric update that failed even after jitter.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed user input (CSV contents, dimension mismatch, bad flag values).
class InputError : public Error {
 public:
  using Error::Error;
};

// A persisted artifact (chain file, config) that cannot be decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace mbsp
