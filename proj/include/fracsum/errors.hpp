#pragma once

#include <stdexcept>
#include <string>

namespace fracsum {

/// Root of the library's exception hierarchy.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid mathematical argument (Hurst index outside (0,1), negative time, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Kernel truncation rule violated (tail mass above the requested bound).
struct TruncationError : Error {
    using Error::Error;
};

/// An input array does not cover the required index range, or a sample is too short.
struct CoverageError : Error {
    using Error::Error;
};

/// A quantity required to be positive vanished (zero variance, zero limit factor, ...).
struct DegenerateError : Error {
    using Error::Error;
};

/// Operation invoked on the wrong branch of the two-case limit (nu = 0 vs nu > 0).
struct WrongBranchError : Error {
    using Error::Error;
};

/// Numerical failure: non-PSD covariance, embedding failure, quadrature blowup,
/// or an internal consistency identity violated beyond tolerance.
struct NumericalError : Error {
    using Error::Error;
};

/// Circulant embedding produced a significantly negative eigenvalue.
struct EmbeddingError : NumericalError {
    EmbeddingError(const std::string& msg, double min_eigenvalue_ratio)
        : NumericalError(msg), min_eigenvalue_ratio(min_eigenvalue_ratio) {}
    double min_eigenvalue_ratio;
};

/// Configuration parse or validation failure; line < 0 when not tied to a file location.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg, int line = -1) : Error(msg), line(line) {}
    int line;
};

}  // namespace fracsum
