#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chs {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Some |phi| >= 1 reached a logarithm.
class DomainViolation : public Error {
public:
    using Error::Error;
};

/// A Krylov solve did not reach its tolerance (also raised on breakdown).
class MaxIterExceeded : public Error {
public:
    MaxIterExceeded(const std::string& what, int iterations, double relative_residual)
        : Error(what), iterations_(iterations), relative_residual_(relative_residual) {}

    int iterations() const noexcept { return iterations_; }
    double relative_residual() const noexcept { return relative_residual_; }

private:
    int iterations_;
    double relative_residual_;
};

/// Singular (mean-zero) solve requested with a right-hand side that has mass.
class IncompatibleRhs : public Error {
public:
    using Error::Error;
};

class NewtonDiverged : public Error {
public:
    NewtonDiverged(const std::string& what, int iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

/// The positivity safeguard had to shrink the step below 2^-30.
class StepTooSmall : public Error {
public:
    using Error::Error;
};

class ResolutionMismatch : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A run-time invariant (positivity, mass, energy dissipation) failed.
class InvariantViolation : public Error {
public:
    InvariantViolation(const std::string& what, long step) : Error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

}  // namespace chs
