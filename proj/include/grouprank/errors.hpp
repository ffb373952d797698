#pragma once

#include <stdexcept>
#include <string>

namespace grouprank {

/// Base of every error the library throws. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input record.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A rating value that is not a member of the configured scale.
class RatingDomainError : public Error {
public:
    using Error::Error;
};

/// Scenario or experiment parameters that cannot be resolved.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// API misuse, e.g. combining objects built from different inputs.
class UsageError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace grouprank
