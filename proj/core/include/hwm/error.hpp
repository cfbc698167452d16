#pragma once

#include <stdexcept>
#include <string>

namespace hwm {

/// Input violates a mathematical precondition (bad parameters, |v| >= 1, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Configuration is well-formed but outside a resolution or stability guard.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative or dense numerical procedure failed to deliver.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hwm
