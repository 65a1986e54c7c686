#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hypersurf {

/// Invalid input: bad arguments, malformed configuration, violated preconditions.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical step failed: unsolvable quad, degenerate geometry, non-convergence.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsolvableQuadError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateQuadError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonConvergenceError : public NumericalError {
public:
    NonConvergenceError(const std::string& what, std::vector<double> history)
        : NumericalError(what), change_history(std::move(history)) {}

    std::vector<double> change_history;
};

}  // namespace hypersurf
