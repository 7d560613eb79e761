#pragma once

#include <stdexcept>
#include <string>

namespace basket {

// Base class of all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A matrix required to be symmetric positive definite failed its factorization.
struct DefinitenessError : Error {
    int minor_order;  // 1-based order of the offending leading principal minor
    explicit DefinitenessError(int order)
        : Error("matrix is not positive definite: leading minor of order " +
                std::to_string(order) + " is not positive"),
          minor_order(order) {}
};

// Input outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// An operation was called on data violating its stated preconditions.
struct PreconditionError : Error {
    using Error::Error;
};

// An iterative solver exhausted its budget without meeting its tolerance.
struct ConvergenceError : Error {
    double best_residual;
    ConvergenceError(const std::string& msg, double residual)
        : Error(msg + " (best residual " + std::to_string(residual) + ")"),
          best_residual(residual) {}
};

// A root finder was handed an interval without a sign change.
struct BracketError : Error {
    using Error::Error;
};

// Adaptive step-size control underflowed; the problem looks stiff.
struct StiffnessError : Error {
    double t_last;  // last accepted time
    explicit StiffnessError(double t)
        : Error("step size underflow at t = " + std::to_string(t)), t_last(t) {}
};

// A quadrature could not certify the requested accuracy.
struct AccuracyError : Error {
    double estimate;  // best available estimate of the integral
    AccuracyError(const std::string& msg, double value)
        : Error(msg), estimate(value) {}
};

// Malformed run configuration (CLI / file input); carries the field name.
struct ConfigError : Error {
    std::string field;
    explicit ConfigError(const std::string& field_name, const std::string& what_arg)
        : Error("invalid configuration field '" + field_name + "': " + what_arg),
          field(field_name) {}
};

}  // namespace basket
