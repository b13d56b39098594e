#pragma once

#include <stdexcept>
#include <string>

namespace macregion {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (negative power, alpha outside [0,1], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid construction parameter such as a frontier resolution below 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Every sample of a frontier collapsed onto a single point.
class DegenerateFrontier : public DomainError {
public:
    DegenerateFrontier() : DomainError("degenerate frontier") {}
};

/// Raised by the estimators when the data cannot support an estimate.
class EstimationError : public DomainError {
public:
    using DomainError::DomainError;
};

} // namespace macregion
