#pragma once

#include <stdexcept>
#include <string>

namespace tmlab {

/// Input that violates an operation's precondition (bad lambda, model mismatch, k = 0, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An inner numeric solve (resolvent) that did not reach its tolerance.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A check was asked to look further than the data it was given.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tmlab
