#pragma once

#include <stdexcept>
#include <string>

namespace boxlab {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A weight is negative beyond the clamping tolerance.
struct NegativeWeight : Error {
  using Error::Error;
};

/// A weight vector (or stochastic-matrix column) does not sum to one.
struct NotNormalized : Error {
  using Error::Error;
};

/// Two objects that must live on the same alphabet do not.
struct AlphabetMismatch : Error {
  using Error::Error;
};

/// An operation requiring a product alphabet was given a plain one.
struct NotProduct : Error {
  using Error::Error;
};

/// A scalar parameter is outside its admissible range.
struct OutOfRange : Error {
  using Error::Error;
};

/// A behavior-level operation requires binary inputs and outputs.
struct NotBinary : Error {
  using Error::Error;
};

/// The deterministic-strategy enumeration exceeds the configured cap.
struct DimensionTooLarge : Error {
  using Error::Error;
};

/// A singular value sits inside the ambiguity band around the rank
/// threshold, so the fixed-space dimension cannot be decided reliably.
struct NumericalRankAmbiguity : Error {
  using Error::Error;
};

/// An iterative solver ran out of iterations above its residual target.
struct ConvergenceFailure : Error {
  using Error::Error;
};

/// Malformed input file or JSON document.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace boxlab
