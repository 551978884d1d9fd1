#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace interband {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid model data (overlapping bands, bad parameters, bad config file).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Quadrature failed to reach the requested tolerance; carries the best estimate.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& msg, std::complex<double> best, double err)
        : Error(msg), best_estimate(best), error_estimate(err) {}
    std::complex<double> best_estimate;
    double error_estimate;
};

/// Root finder did not converge; carries the last iterate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, std::complex<double> last, double res)
        : Error(msg), last_iterate(last), residual(res) {}
    std::complex<double> last_iterate;
    double residual;
};

/// Query point left the declared holomorphy sector of the formfactor.
class SectorError : public Error {
public:
    using Error::Error;
};

}  // namespace interband
