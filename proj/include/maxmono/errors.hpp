#pragma once

#include <stdexcept>
#include <string>

namespace maxmono {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (dimension mismatch, bad parameter).
class UsageError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure broke down (zero pivot, loss of definiteness,
/// non-convergence).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace maxmono
