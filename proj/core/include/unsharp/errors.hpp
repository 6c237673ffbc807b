#pragma once

#include <stdexcept>
#include <string>

namespace unsharp {

// Caller passed a value outside an operation's domain.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// c hit 0 or 1, where one of the rescaled eigenvalues ±A/sqrt(1-c^2), ±B/c
// stops being finite.
class SingularRescalingError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Probe states coincide (c = 1); no orthonormal probe basis carries information.
class DegenerateBasisError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The polarizer annihilated the post-selected ensemble.
class EmptyEnsembleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No rotation angle satisfies the minimum-product condition for a plate stack.
// diagnostic() holds a plain-text dump of the residual curve.
class CalibrationInfeasibleError : public std::runtime_error {
public:
    CalibrationInfeasibleError(const std::string& what, std::string diagnostic)
        : std::runtime_error(what), diagnostic_(std::move(diagnostic)) {}

    const std::string& diagnostic() const noexcept { return diagnostic_; }

private:
    std::string diagnostic_;
};

}  // namespace unsharp
