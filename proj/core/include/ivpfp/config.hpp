#pragma once

#include <cstdint>

#include "ivpfp/errors.hpp"

namespace ivpfp {

// Run-level physical and numerical parameters shared by kinetic and fluid
// integrators. energy_tol is relative: the KEI monitor allows an increase of
// energy_tol * E[f0].
struct SimConfig {
    double kappa = 1.0;              // diffusion strength, >= 0
    double tau = 0.05;               // relaxation time, > 0
    double t_end = 0.2;
    double dt_cfl_factor = 0.4;
    double stabilizer_epsilon = 0.0; // u^(eps) drift + field mollification, 0 = off
    double pb_tol = 1e-10;
    double energy_tol = 1e-6;
    double boundary_mass_tol = 1e-8;
    std::uint64_t seed = 2026;

    void validate() const {
        if (!(tau > 0)) throw GridError("SimConfig: tau must be positive");
        if (kappa < 0) throw GridError("SimConfig: kappa must be nonnegative");
        if (!(t_end > 0)) throw GridError("SimConfig: t_end must be positive");
        if (!(dt_cfl_factor > 0) || dt_cfl_factor > 0.9)
            throw GridError("SimConfig: dt_cfl_factor must lie in (0, 0.9]");
        if (stabilizer_epsilon < 0)
            throw GridError("SimConfig: stabilizer_epsilon must be nonnegative");
    }
};

}  // namespace ivpfp
