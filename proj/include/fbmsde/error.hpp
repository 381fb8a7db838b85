#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fbmsde {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed user input: configuration files, CLI values, problem definitions.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure that should not occur for valid inputs (non-PD matrix,
/// negative circulant eigenvalue, non-finite scheme state, failed root find).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Expression syntax error carrying the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Failure while evaluating an expression (unbound parameter, division by
/// zero, non-finite result).
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fbmsde
