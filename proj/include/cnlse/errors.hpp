#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cnlse {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A field carries NaN/Inf entries or has the wrong shape.
class InvalidStateError : public Error {
public:
    using Error::Error;
};

/// A value violates a documented invariant (grid, physics, policy, scenario).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Parameters outside the domain of an analytic solution.
class UnsupportedParametersError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Malformed scenario document.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// The linear solver hit a zero pivot.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Time stepping produced non-finite values or the instability detector fired.
class BlowUpError : public Error {
public:
    BlowUpError(std::size_t step, const std::string& what) : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// The implicit step's nonlinear iteration did not converge.
class IterationFailureError : public Error {
public:
    IterationFailureError(std::size_t step, int iterations, double residual, const std::string& what)
        : Error(what), step_(step), iterations_(iterations), residual_(residual) {}
    std::size_t step() const noexcept { return step_; }
    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t step_;
    int iterations_;
    double residual_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cnlse
