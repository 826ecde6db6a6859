#pragma once

#include <stdexcept>
#include <string>

namespace mfgs {

// Error taxonomy mirrors the CLI exit codes: validation -> 2, solver -> 1, io -> 3.

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double last_residual = 0.0)
        : std::runtime_error(what), last_residual_(last_residual) {}
    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mfgs
