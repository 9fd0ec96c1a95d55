#pragma once

#include <stdexcept>
#include <string>

namespace orbitforge {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedScalarError : public Error {
 public:
  using Error::Error;
};

// I - U/2 was numerically singular; callers halve the step and retry.
class RetractionFailure : public Error {
 public:
  using Error::Error;
};

// Raised by geodesic_check when x1 == x2: the bi-invariant case has no mixed condition.
class NormalMetricError : public Error {
 public:
  using Error::Error;
};

class AlgebraMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbitforge
