#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dynascore {

// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rejected argument or parameter bundle.
class ParamError : public Error {
public:
    using Error::Error;
};

// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::int64_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::int64_t line() const noexcept { return line_; }

private:
    std::int64_t line_;
};

// Two-state chain with |p+q-1| == 1: no stationary regime exists.
class DegenerateError : public Error {
public:
    using Error::Error;
};

// Broken internal invariant; indicates a bug, not bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace dynascore
