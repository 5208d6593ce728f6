#pragma once

#include <stdexcept>
#include <string>

namespace singp {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input violates a documented precondition or invariant.
struct DomainError : Error {
    using Error::Error;
};

// A computation exceeded its configured budget (enumeration size,
// search-set cardinality, matrix dimension, ...).
struct ResourceError : Error {
    using Error::Error;
};

// Requested certified tolerance could not be met.
struct PrecisionError : Error {
    using Error::Error;
};

// Odd exponent r with an asymmetric base distribution.
struct UnsupportedExponentError : DomainError {
    using DomainError::DomainError;
};

// Modulus is not an odd prime, or shares a factor with a denominator.
struct BadPrimeError : DomainError {
    using DomainError::DomainError;
};

// Fixed rows have no invertible minor over the working field.
struct DependentFixedRowsError : DomainError {
    using DomainError::DomainError;
};

// An inner characteristic-function factor evaluated negative; the attached
// certificate does not actually majorize.
struct NegativeBaseError : DomainError {
    using DomainError::DomainError;
};

// Element is not a member of the progression (or has no proper coefficients).
struct NotMemberError : DomainError {
    using DomainError::DomainError;
};

// Coefficient image already spans full rank; nothing to reduce.
struct AlreadySpanningError : DomainError {
    using DomainError::DomainError;
};

} // namespace singp
