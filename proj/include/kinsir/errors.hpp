#pragma once

#include <stdexcept>
#include <string>

namespace kinsir {

/// Invalid or incomplete scenario configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values, failed solves, step-size violations (CLI exit code 3).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation outside the domain of a closed-form expression.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace kinsir
