#pragma once

#include <stdexcept>
#include <string>

namespace blab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A zero outside the punctured open disk (z = 0 or |z| >= 1).
class InvalidZeroError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A sampler could not place the requested points inside a region.
class SamplingFailure : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of a check does not hold for the input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Quadrature did not reach the requested agreement under node doubling.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Argument-principle count could not be rounded reliably.
class InconclusiveContourError : public Error {
 public:
  using Error::Error;
};

/// Malformed input files (zero-set text, boundary-set JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace blab
