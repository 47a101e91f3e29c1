#pragma once

#include <stdexcept>
#include <string>

namespace urboot {

/// Input that violates a documented precondition (shape, range, missingness).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed CSV input. Carries the 1-based line number when known.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line)
        : ValidationError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Numerically degenerate data: zero variance, exact collinearity, perfect fit.
class DegenerateInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace urboot
