#pragma once

#include <stdexcept>
#include <string>

namespace cggm {

// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mismatched vector/matrix dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Invalid parameter value (e.g. mu <= 0, duplicate constraint pair).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Numerical failure: eigendecomposition did not converge, solver diverged,
// line search stagnated.
class NumericError : public Error {
public:
    using Error::Error;
};

// Malformed input file contents.
class ParseError : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure (cannot open/read/write).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cggm
