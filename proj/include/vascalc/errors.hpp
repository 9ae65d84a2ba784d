#pragma once

#include <stdexcept>
#include <string>

namespace vascalc {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// CTV header text is malformed (missing/unknown/duplicate field, bad syntax).
class HeaderError : public Error {
public:
    using Error::Error;
};

/// Payload declares a sample type other than the one required.
class DtypeError : public Error {
public:
    using Error::Error;
};

/// Payload byte length does not match the declared dims.
class PayloadSizeError : public Error {
public:
    using Error::Error;
};

/// Mask payload contains a sample other than 0 or 1.
class MaskValueError : public Error {
public:
    using Error::Error;
};

/// Two volumes combined in a binary operation have different dims.
class DimsMismatchError : public Error {
public:
    using Error::Error;
};

/// A parameter violates its documented precondition.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace vascalc
