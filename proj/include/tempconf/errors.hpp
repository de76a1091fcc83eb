#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tempconf {

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// Timestamps must be strictly increasing.
class TimestampOrderError : public Error {
public:
    using Error::Error;
};

class DuplicateTimestampError : public TimestampOrderError {
public:
    using TimestampOrderError::TimestampOrderError;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    NumericError(std::size_t step, const std::string& what)
        : Error("non-finite value at t=" + std::to_string(step) + ": " + what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

// Any model fit/predict failure inside a backtest, tagged with the step that triggered it.
class ModelError : public Error {
public:
    using Error::Error;
};

}  // namespace tempconf
