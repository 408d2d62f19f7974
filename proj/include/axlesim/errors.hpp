#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace axlesim {

/// Root of the toolkit's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, specs or configuration (CLI exit code 2).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Lookup outside the valid domain of a sampled quantity.
class RangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Numerical failure: divergence, non-finite training, degenerate normalization (exit code 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public NumericalError {
public:
    DivergenceError(std::size_t step, const std::string& what)
        : NumericalError(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class TrainingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// File-system or format problems (exit code 4).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace axlesim
