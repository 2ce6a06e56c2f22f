#pragma once

#include <stdexcept>
#include <string>

namespace ihoc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector/matrix sizes disagree with the declared state or control dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold (non-compact set
/// for a strong-principle check, missing star center, infeasible process...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A user-supplied map returned a non-finite value or threw.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Combinatorial or iteration caps were exceeded, or an iteration diverged.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace ihoc
