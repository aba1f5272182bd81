#ifndef LESIONSEG_ERRORS_HPP
#define LESIONSEG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lesionseg {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ChannelMismatch : Error {
    using Error::Error;
};

struct OutOfBounds : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct BadChannel : Error {
    using Error::Error;
};

struct FilterTooLarge : Error {
    using Error::Error;
};

struct ImageTooSmall : Error {
    using Error::Error;
};

struct DegenerateContour : Error {
    using Error::Error;
};

struct DegenerateHistogram : Error {
    using Error::Error;
};

struct EmptyRegion : Error {
    using Error::Error;
};

struct MalformedMask : Error {
    using Error::Error;
};

struct UnmatchedIds : Error {
    using Error::Error;
};

struct ShapeOutOfBounds : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

/// I/O failures (unreadable files, decode/encode errors). The CLI maps
/// these to exit code 2; every other Error maps to exit code 1.
struct IoError : Error {
    using Error::Error;
};

} // namespace lesionseg

#endif
