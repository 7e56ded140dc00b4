#pragma once

#include <stdexcept>
#include <string>

namespace salm {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector lengths or index sets do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A point or tangent vector does not belong where it is used.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An algorithm parameter is out of its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A polygon is degenerate, not simple, or overlaps another one.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A retraction produced an invalid point; the caller may retry with a
/// shorter step.
class StepRejected : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Non-finite values or a failed linear solve.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace salm
