#pragma once

#include <stdexcept>
#include <string>

namespace ggm {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A model family specification violates its parameter constraints.
struct InvalidSpec : Error {
    using Error::Error;
};

/// An assembled precision matrix failed the positive-definiteness check.
struct NotPositiveDefinite : Error {
    using Error::Error;
};

/// Covariance factorization failed (matrix numerically indefinite).
struct FactorizationFailure : Error {
    using Error::Error;
};

/// Too few samples for the requested estimator.
struct InsufficientSamples : Error {
    using Error::Error;
};

/// A conditioning submatrix is rank deficient beyond tolerance.
struct SingularSubmatrix : Error {
    using Error::Error;
};

/// A scalar argument lies outside the admissible range of a formula.
struct DomainError : Error {
    using Error::Error;
};

/// Branch-and-bound box bounds clipped the true optimum.
struct BoundsTooTight : Error {
    using Error::Error;
};

/// Experiment configuration is inconsistent or incomplete.
struct InvalidConfig : Error {
    using Error::Error;
};

/// File parsing or serialization failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace ggm
