#pragma once

#include <stdexcept>
#include <string>

namespace devo {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Search-space and genome errors.
struct BoundsError : Error { using Error::Error; };
struct EmptySpaceError : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct OutOfBoundsGenome : Error { using Error::Error; };

// Population errors.
struct EmptyPopulation : Error { using Error::Error; };
struct PopulationTooSmall : Error { using Error::Error; };

// Budget accounting.
struct BudgetExhausted : Error { using Error::Error; };

// Evaluation failures. NumericalInstability aborts a replicate with a
// diagnostic; the process-adapter errors carry the child's last state.
struct EvaluatorFailure : Error { using Error::Error; };
struct NumericalInstability : EvaluatorFailure { using EvaluatorFailure::EvaluatorFailure; };
struct ProtocolError : EvaluatorFailure { using EvaluatorFailure::EvaluatorFailure; };
struct TimeoutError : EvaluatorFailure { using EvaluatorFailure::EvaluatorFailure; };
struct NonZeroExit : EvaluatorFailure { using EvaluatorFailure::EvaluatorFailure; };

// Simulation setup.
struct DomainTooSmall : Error { using Error::Error; };

// Harness.
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace devo
