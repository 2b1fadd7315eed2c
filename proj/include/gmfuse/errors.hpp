#pragma once

#include <stdexcept>
#include <string>

namespace gmfuse {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (dimension mismatch, empty mixture, ...).
struct ContractError : Error {
    using Error::Error;
};

/// A matrix that must be invertible is numerically singular, or the
/// measurement geometry is degenerate (target at the sensor position).
struct SingularityError : Error {
    using Error::Error;
};

/// All component weights or association weights vanished.
struct DegenerateError : Error {
    using Error::Error;
};

/// Evaluation point lies outside the numerical support of a component.
struct ConditioningError : Error {
    using Error::Error;
};

/// Scenario file failed validation; message lists every violation.
struct ValidationError : Error {
    using Error::Error;
};

/// Scenario file could not be parsed.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace gmfuse
