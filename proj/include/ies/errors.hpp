#pragma once

#include <stdexcept>
#include <string>

namespace ies {

// Bad parameter values or malformed configuration/input files.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A decision (or whole scheduling instance) that cannot satisfy the device
// constraints. Carried as an exception only where the caller asked for a
// feasible result; solvers represent infeasibility as a value instead.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite losses or other unrecoverable states inside the training loop.
struct TrainingError : std::runtime_error {
    explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ies
