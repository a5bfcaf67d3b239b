#pragma once

#include <stdexcept>

namespace mmnn {

// Base class for all library failures; CLI maps each subtype to a nonzero exit.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// A normalizing maximum or sum of kernel weights vanished.
struct ZeroDenominator : Error {
  using Error::Error;
};

// A requested constant is the +infinity marker.
struct NonIntegrable : Error {
  using Error::Error;
};

// Adaptive integration exhausted its refinement depth.
struct QuadratureFailure : Error {
  using Error::Error;
};

// Paired sequences of unequal length.
struct LengthMismatch : Error {
  using Error::Error;
};

// Malformed file content.
struct ParseError : Error {
  using Error::Error;
};

// Recognized container, unsupported encoding (e.g. non-PCM WAV).
struct UnsupportedFormat : Error {
  using Error::Error;
};

}  // namespace mmnn
