#pragma once

#include <stdexcept>
#include <string>

namespace graphpae {

/// Base of every exception thrown by the library. The CLI maps the concrete
/// subclass to a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user-supplied argument or configuration value.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text; the message names the file and line.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An index outside its valid range (e.g. node id >= N).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input whose contents are unusable (NaN features, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Binary file with wrong magic, version or truncated payload.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Tensor shapes incompatible for an operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Non-convergence, NaN losses and similar numerical failures.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A metric that is undefined for the supplied labels.
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphpae
