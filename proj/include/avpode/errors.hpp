#pragma once

#include <stdexcept>
#include <string>

namespace avpode {

/// Base class for every error thrown by the toolkit.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgumentError : Error {
    using Error::Error;
};

/// A step or rhs evaluation produced a non-finite value.
struct NumericOverflowError : Error {
    using Error::Error;
};

/// The requested operation is not defined for the method kind.
struct UnsupportedMethodError : Error {
    using Error::Error;
};

/// A piecewise break point does not coincide with a grid point of its leg.
struct GridMisalignmentError : Error {
    using Error::Error;
};

/// Both refinement levels reproduced the exact solution; no order measurable.
struct DegenerateOrderError : Error {
    using Error::Error;
};

}  // namespace avpode
