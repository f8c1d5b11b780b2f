#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace floq {

namespace detail {

/// Compact decimal rendering for diagnostics (std::to_string drops small
/// magnitudes to 0.000000).
inline std::string num_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace detail

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An index, level or count outside its admissible range.
struct RangeError : Error {
    using Error::Error;
};

// Matrix dimensions do not fit the operation.
struct ShapeError : Error {
    using Error::Error;
};

// Input data violates a documented invariant.
struct ValidationError : Error {
    using Error::Error;
};

// Overflow, non-convergence, non-finite values.
struct NumericError : Error {
    using Error::Error;
};

// A requested accuracy could not be met at the given resolution.
struct AccuracyError : NumericError {
    using NumericError::NumericError;
};

// A solve or inversion hit a (near-)singular pivot.
struct ConditioningError : NumericError {
    using NumericError::NumericError;
};

// A computed result failed its own consistency check.
struct VerificationError : Error {
    using Error::Error;
};

// An operation was called on data it is not meant for.
struct UsageError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace floq
