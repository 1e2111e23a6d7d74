#pragma once

#include <stdexcept>
#include <string>

namespace lle {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the validity range of a formula or operation.
struct DomainError : Error {
    using Error::Error;
};

struct AmbiguousClassification : Error {
    using Error::Error;
};

// Requested bifurcation variant disagrees with the computed spectrum.
struct WrongClass : Error {
    using Error::Error;
};

struct NearSingular : Error {
    NearSingular(const std::string& what, double cond) : Error(what), condition(cond) {}
    double condition;
};

// A closed-form coefficient contradicts the sign asserted for its range.
struct SignViolation : Error {
    using Error::Error;
};

// Profile requested outside the regime where the solution family exists.
// `clause` names the inequality that failed.
struct RegimeError : Error {
    RegimeError(const std::string& clause_)
        : Error("regime violated: " + clause_), clause(clause_) {}
    std::string clause;
};

struct GridTooCoarse : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct SingularJacobian : Error {
    using Error::Error;
};

} // namespace lle
