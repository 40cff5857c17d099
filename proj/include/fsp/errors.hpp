#pragma once

#include <stdexcept>
#include <string>

namespace fsp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed file or stream contents (PGM header, model file, FSPV stream).
struct FormatError : Error {
    using Error::Error;
};

/// Shape mismatch: box outside frame, vector length vs model dimension, etc.
struct DimensionError : Error {
    using Error::Error;
};

/// Invalid values or insufficient data: empty clip, n < k, NaN input,
/// out-of-range score, mismatched id sets.
struct DataError : Error {
    using Error::Error;
};

/// Filesystem-level failure (missing file, unwritable path).
struct IoError : Error {
    using Error::Error;
};

} // namespace fsp
