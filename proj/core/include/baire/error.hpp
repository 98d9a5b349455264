// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace baire {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (bad base, depth out of range, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A scalar could not be turned into a digit string (NaN, infinity).
class EncodingError : public Error {
 public:
  using Error::Error;
};

/// Two digit strings were produced under different parameters.
class IncompatibleEncodingError : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed or inconsistent.
class DataError : public Error {
 public:
  using Error::Error;
};

/// File-system failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace baire
