#pragma once

#include <stdexcept>
#include <string>

namespace qcap {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input documents: bad JSON, ragged matrix rows, wrong field types.
struct ParseError : Error {
  using Error::Error;
};

// Filesystem failures: missing files, unwritable paths.
struct IoError : Error {
  using Error::Error;
};

// A mathematical invariant does not hold: non-Hermitian state, trace away
// from one, incomplete Kraus set, and similar.
struct ValidationError : Error {
  using Error::Error;
};

// Operands whose dimensions do not fit together.
struct DimensionError : ValidationError {
  using ValidationError::ValidationError;
};

// A documented precondition was violated by the caller.
struct PreconditionError : ValidationError {
  using ValidationError::ValidationError;
};

// The joint output is not close enough to a B:E product state for the
// perfect-input construction; carries the measured trace distance.
struct ProductStructureError : PreconditionError {
  double distance;
  ProductStructureError(const std::string& what, double measured_distance)
      : PreconditionError(what), distance(measured_distance) {}
};

}  // namespace qcap
