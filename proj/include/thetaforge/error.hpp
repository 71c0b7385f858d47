#ifndef THETAFORGE_ERROR_HPP
#define THETAFORGE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace thetaforge {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid input: bad dimensions, non-symmetric or non-positive-definite
/// period matrix, characteristic order mismatch, admissibility violations.
struct DomainError : Error {
    using Error::Error;
};

/// A numeric operation could not produce a meaningful result (vanishing
/// denominator, all-zero projective coordinates, ...).
struct EvaluationError : Error {
    using Error::Error;
};

/// Two independent computation routes for the same quantity disagree.
struct CrossCheckError : Error {
    using Error::Error;
};

/// A gradient frame is rank-deficient where full rank is required.
struct DegenerateFrameError : EvaluationError {
    using EvaluationError::EvaluationError;
};

/// A kernel extraction did not yield a well-separated one-dimensional kernel.
struct AmbiguousReconstructionError : EvaluationError {
    using EvaluationError::EvaluationError;
};

/// Too few usable samples for an estimation.
struct InsufficientDataError : Error {
    using Error::Error;
};

} // namespace thetaforge

#endif
