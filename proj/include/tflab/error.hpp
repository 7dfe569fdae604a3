#pragma once

#include <stdexcept>
#include <string>

namespace tflab {

// Invalid input or an unsatisfied precondition. Maps to exit code 2.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Point evaluation at a nucleus.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

// An integral that does not converge for the given input.
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

// Iterative solver failed to converge. Maps to exit code 3.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tflab
