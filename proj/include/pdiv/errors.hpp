#pragma once

#include <stdexcept>
#include <string>

namespace pdiv {

// Input does not describe a valid quantum state (e.g. Bloch vector outside the ball).
class InvalidStateError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of an operation (non-Hermitian input, prior outside [0,1], ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A map that has to be inverted is singular.
class SingularMapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A time-indexed object is singular at a specific instant.
class SingularAtTimeError : public std::runtime_error {
public:
    SingularAtTimeError(const std::string& what, double t)
        : std::runtime_error(what + " at t = " + std::to_string(t)), time_(t) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

// Classical process T(t) not invertible.
class SingularProcessError : public SingularAtTimeError {
public:
    using SingularAtTimeError::SingularAtTimeError;
};

// Generator of a covariant family undefined (|lambda|^2 = |mu|^2 or a + b = 1).
class SingularGeneratorError : public SingularAtTimeError {
public:
    using SingularAtTimeError::SingularAtTimeError;
};

// Scenario configuration rejected (unknown key, bad value, missing field).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace pdiv
