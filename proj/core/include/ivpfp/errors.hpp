#pragma once

#include <stdexcept>
#include <string>

namespace ivpfp {

// Base class for all solver/run failures raised by this library.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative solver ran out of iterations; carries the last residual seen.
struct NonConvergence : SimError {
    double last_residual;
    NonConvergence(const std::string& what, double residual)
        : SimError(what + " (last residual " + std::to_string(residual) + ")"),
          last_residual(residual) {}
};

struct ZeroMass : SimError {
    using SimError::SimError;
};

// Density dropped below rho_floor: the classical-solution regime is gone and
// the run is invalid for comparison purposes.
struct VacuumBreach : SimError {
    using SimError::SimError;
};

struct TridiagonalFailure : SimError {
    using SimError::SimError;
};

// Cumulative mass loss through the v-domain boundary exceeded tolerance.
struct AbortOnLeak : SimError {
    using SimError::SimError;
};

struct MassMismatch : SimError {
    using SimError::SimError;
};

struct NonpositiveReference : SimError {
    using SimError::SimError;
};

struct NonpositiveValue : SimError {
    using SimError::SimError;
};

// Grid or precondition violations (mis-sized velocity domain, bad config).
struct GridError : SimError {
    using SimError::SimError;
};

struct CflViolation : SimError {
    using SimError::SimError;
};

}  // namespace ivpfp
