#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ssc {

// Bad arguments: non-finite entries, dimension mismatches, invalid configs.
class InvalidInputError : public std::invalid_argument {
public:
    explicit InvalidInputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed external data (CSV parse failures, inconsistent rows).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative method hit its iteration cap before meeting tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, std::vector<double> last_iterate, double residual)
        : std::runtime_error(msg), last_iterate(std::move(last_iterate)), residual(residual) {}

    std::vector<double> last_iterate;
    double residual;
};

// Rank-deficient dictionary or singular anchor system.
class SingularError : public std::runtime_error {
public:
    explicit SingularError(const std::string& msg) : std::runtime_error(msg) {}
};

// A dual point that is infeasible for the solve it claims to certify.
class StaleSolutionError : public std::runtime_error {
public:
    explicit StaleSolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ssc
