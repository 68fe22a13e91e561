#pragma once

#include <stdexcept>
#include <string>

namespace lexca {

// Error hierarchy mirrored by the CLI exit codes (see tools/).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameter or configuration value.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Malformed input data (corpus records, word lists, artifact files).
class InputFormatError : public Error {
public:
    using Error::Error;
};

// Statistical precondition not met (zero-mass rows, missing artifacts, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace lexca
