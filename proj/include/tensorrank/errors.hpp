#pragma once

#include <stdexcept>
#include <string>

namespace tensorrank {

/// Base class for every error raised by the library. Verifiers and the CLI
/// catch this type and report it instead of terminating.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FieldMismatch : public Error {
public:
    FieldMismatch() : Error("operands belong to different fields") {}
    explicit FieldMismatch(const std::string& what) : Error(what) {}
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by zero") {}
};

class InvalidField : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The field does not have enough elements for the requested construction.
class FieldTooSmall : public Error {
public:
    using Error::Error;
};

/// A certificate was checked and found not to prove its claim.
class InvalidCertificate : public Error {
public:
    using Error::Error;
};

/// An exhaustive search would exceed its configured work budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

} // namespace tensorrank
