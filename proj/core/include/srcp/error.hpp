#pragma once

#include <stdexcept>
#include <string>

namespace srcp {

// Base for every error the library reports. The CLI maps the concrete kinds
// onto exit codes: ParseError/ValidationError/ConfigError/ComparisonError -> 2,
// InvariantError -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (trace lines, JSON documents).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Well-formed input that violates a domain rule (core id out of range,
// non-monotonic sequence numbers, trace/config mismatch).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Inconsistent or out-of-range configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Two stats documents that do not describe the same experiment.
class ComparisonError : public Error {
public:
    using Error::Error;
};

// A simulator-internal invariant was breached. Always a bug, never bad input.
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace srcp
