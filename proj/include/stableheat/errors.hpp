#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace stableheat {

// Broad failure classes; the CLI maps each to a distinct exit code.
enum class ErrorClass { validation, numerical, precondition, io };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ErrorClass error_class() const noexcept = 0;
};

class ValidationError : public Error {
public:
    using Error::Error;
    ErrorClass error_class() const noexcept override { return ErrorClass::validation; }
};

// Parameter outside its mathematical domain.
class ParameterError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DivergenceError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnobservableEventError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// The heat kernel at t = 0 is a delta; callers must use convolve instead.
class DeltaSingularityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NumericalError : public Error {
public:
    using Error::Error;
    ErrorClass error_class() const noexcept override { return ErrorClass::numerical; }
};

class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class AccuracyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonContractionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BlowUpError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A sample point at which a coefficient audit failed.
struct Witness {
    double t = 0.0;
    double x = 0.0;
    double u = 0.0;
    double v = 0.0;
    std::string property;
};

std::string describe(const Witness& w);

class HypothesisError : public Error {
public:
    HypothesisError(const std::string& what, Witness w)
        : Error(what + " [" + describe(w) + "]"), witness_(std::move(w)) {}
    ErrorClass error_class() const noexcept override { return ErrorClass::validation; }
    const Witness& witness() const noexcept { return witness_; }

private:
    Witness witness_;
};

class OrderingError : public HypothesisError {
public:
    using HypothesisError::HypothesisError;
};

// An experiment gate refused to run.
class PreconditionError : public Error {
public:
    using Error::Error;
    ErrorClass error_class() const noexcept override { return ErrorClass::precondition; }
};

class IoError : public Error {
public:
    using Error::Error;
    ErrorClass error_class() const noexcept override { return ErrorClass::io; }
};

}  // namespace stableheat
