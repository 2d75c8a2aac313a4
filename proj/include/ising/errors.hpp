#pragma once

#include <stdexcept>
#include <string>

namespace ising {

// Malformed input: invariant of a graph, instance or query violated.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Problem too large for the requested exact method.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A counterexample construction could not be completed (root solve failed).
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Conditioning on an event of probability zero.
class ImpossibleEventError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace ising
