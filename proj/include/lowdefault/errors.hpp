#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lowdefault {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input data violates a documented invariant (e.g. defaults >= pool size).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed text input. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A numerical procedure failed (root not bracketed, degenerate grid, ...).
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownDatasetError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

}  // namespace lowdefault
