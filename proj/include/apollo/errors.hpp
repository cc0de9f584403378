#pragma once

#include <stdexcept>
#include <string>

namespace apollo {

// Input violates a structural precondition (bad quadruple, bad grid, ...).
// The CLI maps these to exit code 3.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NonDescartesError : ValidationError {
    using ValidationError::ValidationError;
};

struct InvalidRootError : ValidationError {
    using ValidationError::ValidationError;
};

struct DuplicateThresholdError : ValidationError {
    using ValidationError::ValidationError;
};

struct InsufficientDataError : ValidationError {
    using ValidationError::ValidationError;
};

struct ZeroCoordinateError : ValidationError {
    using ValidationError::ValidationError;
};

// Numeric argument outside the closed-form's region of validity.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// The three given curvatures admit no real fourth tangent circle.
struct NoRealSolutionError : DomainError {
    using DomainError::DomainError;
};

// An exact result exists but is irrational, so it cannot be returned
// in rational arithmetic (non-square radicand).
struct NotRepresentableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reduction failed to make progress; the input cannot come from a packing.
struct NonTerminatingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A traversal hit its node cap before finishing.  CLI exit code 4.
struct BudgetExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File could not be read or written.  CLI exit code 5.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace apollo
