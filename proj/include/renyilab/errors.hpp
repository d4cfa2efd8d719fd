#pragma once

#include <stdexcept>
#include <string>

namespace renyi {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonHermitianInput : Error {
    using Error::Error;
};

struct NegativeEigenvalue : Error {
    using Error::Error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct InvalidPovm : Error {
    using Error::Error;
};

struct SingularSigma : Error {
    using Error::Error;
};

struct InvalidState : Error {
    using Error::Error;
};

struct InvalidChannel : Error {
    using Error::Error;
};

} // namespace renyi
