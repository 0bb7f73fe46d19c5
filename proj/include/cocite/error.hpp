#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cocite {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid configuration value or parameter.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Numerical failure (non-convergence, undefined quantity).
class NumericError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A pipeline stage failed; wraps the underlying cause with the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& cause)
        : Error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace cocite
