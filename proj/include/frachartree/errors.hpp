#pragma once

#include <stdexcept>
#include <string>

namespace frachartree {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical parameter lies outside the admissible range of an operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Inputs are inconsistent with each other (size mismatch, grid mismatch,
/// wrong representation).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing an artifact failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace frachartree
