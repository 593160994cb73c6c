#pragma once

#include <stdexcept>
#include <string>

namespace grushin {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument outside the mathematical domain (delta <= -1, a == 0, ...).
struct DomainError : Error {
    using Error::Error;
};

// A grid does not satisfy a sampling condition. The message names it.
struct ResolutionError : Error {
    using Error::Error;
};

struct QuadratureError : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct AdmissibilityError : Error {
    using Error::Error;
};

}  // namespace grushin
