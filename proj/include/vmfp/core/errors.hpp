#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vmfp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class StabilityError : public Error {
public:
    using Error::Error;
};

class PositivityError : public Error {
public:
    using Error::Error;
};

class StateError : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

class NeutralityViolation : public Error {
public:
    NeutralityViolation(const std::string& what, double mean)
        : Error(what), mean_(mean) {}
    double mean() const noexcept { return mean_; }

private:
    double mean_;
};

class ConsistencyError : public Error {
public:
    ConsistencyError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class IterationError : public Error {
public:
    IterationError(const std::string& what, std::vector<double> residuals)
        : Error(what), residuals_(std::move(residuals)) {}
    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// Raised by config loading; carries the offending line (0 when not tied to one).
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace vmfp
