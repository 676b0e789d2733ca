#pragma once

#include <stdexcept>
#include <string>

namespace palmroi {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad dimensions, rect out of bounds, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// File system failure: missing input, unwritable output.
class IoError : public Error {
public:
    using Error::Error;
};

/// Trimming rejected every strip of one orientation.
class EmptyRoiError : public Error {
public:
    using Error::Error;
};

/// Malformed text input (manifest, template database).
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace palmroi
