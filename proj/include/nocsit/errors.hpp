#pragma once

#include <stdexcept>
#include <string>

namespace nocsit {

// Base of every error the library throws. The CLI maps subclasses onto exit
// codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (antenna counts, variable counts).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numeric parameter outside its documented range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A structural premise of a formula does not hold (e.g. antenna ordering).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Input outside the mathematical domain (non-PD covariance, negative eigenvalue).
class DomainError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

/// A computed artifact failed its own exact self-check.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

/// Polytope that violates the boundedness invariant.
class StructuralError : public Error {
public:
    using Error::Error;
};

class InfeasiblePointError : public Error {
public:
    InfeasiblePointError(const std::string& what, std::string constraint, double excess)
        : Error(what), constraint_(std::move(constraint)), excess_(excess) {}

    const std::string& constraint() const noexcept { return constraint_; }
    double excess() const noexcept { return excess_; }

private:
    std::string constraint_;
    double excess_;
};

/// A mathematical claim failed to verify (unprovable lemma instance,
/// violated numeric check). Distinct from usage errors.
class MathematicalFailure : public Error {
public:
    using Error::Error;
};

/// Malformed text input (certificate or region files, CSV).
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace nocsit
