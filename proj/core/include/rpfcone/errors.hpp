#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rpfcone {

// Bad user input (configs, mismatched grids, wrong value kinds).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A precondition of an operation does not hold for the given data
// (e.g. an argument is outside the cone it must belong to).
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

struct PairingError : std::runtime_error {
    explicit PairingError(const std::string& what) : std::runtime_error(what) {}
};

struct OrbitError : std::runtime_error {
    OrbitError(const std::string& what, long step) : std::runtime_error(what), step_index(step) {}
    long step_index;
};

struct ApertureViolation : std::runtime_error {
    explicit ApertureViolation(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, std::vector<double> trace)
        : std::runtime_error(what), residual_trace(std::move(trace)) {}
    std::vector<double> residual_trace;
};

struct DegeneracyError : std::runtime_error {
    explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rpfcone
