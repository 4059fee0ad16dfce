#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sspop {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or incomplete run configuration, unknown preset, CFL refusal.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Arguments with the wrong shape (length mismatch, invalid mesh).
class InputError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A coefficient evaluator produced a non-finite value.
class CoefficientError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Failures of the numerics themselves; the CLI maps these to exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

class BlowUpError : public NumericalError {
public:
    BlowUpError(std::size_t step, double time, const std::string& detail, const std::string& context = {})
        : NumericalError((context.empty() ? std::string{} : context + ": ") + "blow-up at step " +
                         std::to_string(step) + " (t = " + std::to_string(time) + "): " + detail),
          step_(step),
          time_(time),
          detail_(detail) {}

    /// Same failure, tagged with the run that produced it (e.g. a sweep row).
    BlowUpError with_context(const std::string& context) const { return {step_, time_, detail_, context}; }

    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    std::size_t step_;
    double time_;
    std::string detail_;
};

/// Boundary recruitment with vanishing growth at s = 0 and nonzero inflow.
class SingularBoundaryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoConvergenceError : public NumericalError {
public:
    NoConvergenceError(const std::string& what, std::vector<std::complex<double>> trace)
        : NumericalError(what), trace_(std::move(trace)) {}

    /// Newton iterates in order; the last entry is the final iterate.
    const std::vector<std::complex<double>>& trace() const noexcept { return trace_; }

private:
    std::vector<std::complex<double>> trace_;
};

} // namespace sspop
