#pragma once

#include <stdexcept>
#include <string>

namespace dgot {

/// Bad run/tool configuration (missing files, inconsistent options, exhausted
/// mock scripts). CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data; carries the offending location in the message.
/// CLI exit code 3.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally valid input that violates a domain invariant. CLI exit code 3.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A caller passed an out-of-domain argument. CLI exit code 3.
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Transport or model-side failure after retries were exhausted. CLI exit code 4.
class BackendError : public std::runtime_error {
public:
    BackendError(const std::string& what, int attempts)
        : std::runtime_error(what), attempts_(attempts) {}

    int attempts() const { return attempts_; }

private:
    int attempts_;
};

/// The prompt budget is too small to render a meaningful prompt.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dgot
