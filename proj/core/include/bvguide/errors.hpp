#pragma once

#include <stdexcept>
#include <string>

namespace bvguide {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- argument / geometry errors -------------------------------------------

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class ChannelMismatch : public Error {
public:
    using Error::Error;
};

class InvalidKernelSize : public Error {
public:
    using Error::Error;
};

class DegenerateHistogram : public Error {
public:
    using Error::Error;
};

class CoverageGap : public Error {
public:
    using Error::Error;
};

class PlacementFailure : public Error {
public:
    using Error::Error;
};

// --- I/O errors ------------------------------------------------------------

class IoError : public Error {
public:
    using Error::Error;
};

class FileNotFound : public IoError {
public:
    using IoError::IoError;
};

class UnsupportedFormat : public IoError {
public:
    using IoError::IoError;
};

class CorruptImage : public IoError {
public:
    using IoError::IoError;
};

class BadMagic : public IoError {
public:
    using IoError::IoError;
};

class BadVersion : public IoError {
public:
    using IoError::IoError;
};

class TruncatedFile : public IoError {
public:
    using IoError::IoError;
};

} // namespace bvguide
