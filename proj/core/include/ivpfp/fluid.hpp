#pragma once

#include <vector>

#include "ivpfp/config.hpp"
#include "ivpfp/macro.hpp"
#include "ivpfp/poisson_boltzmann.hpp"

namespace ivpfp {

struct FluidState {
    MacroState macro;
    Potential potential;
    double time = 0;
};

// Electron density rho_e = e^phi and the auxiliary velocity u_e making it
// satisfy a continuity equation; continuity_residual is the L2 norm of
// d_t rho_e + d_x(rho_e u_e) evaluated forward.
struct ElectronField {
    Field rho_e;
    Field u_e;
    double continuity_residual = 0;
};

struct FluidOptions {
    bool second_order = false;  // minmod-limited MUSCL reconstruction
    double rho_floor = 1e-8;
    double pb_tol = 1e-10;
};

// One forward-Euler finite-volume step: Rusanov fluxes for
// A(U) = (m, m^2/rho + kappa rho), then the source (0, -rho d_x phi) applied
// unsplit at cell centers with phi refreshed by solve_pb. Mass conservation is
// exact by telescoping fluxes. Throws VacuumBreach if rho drops below
// rho_floor and CflViolation if (max|u| + sqrt(kappa)) dt/dx > 0.9.
FluidState fluid_step(const FluidState& state, double dt, double kappa,
                      const FluidOptions& opts = {});

// int [ |m|^2/(2 rho) + kappa rho log rho + |grad phi|^2/2 + e^phi(phi-1) + 1 ].
double fluid_total_energy(const FluidState& state, double kappa);

// Builds (rho_e, u_e): dphi/dt from the linearized solve, then the zero-mean
// divergence solve -Lap psi = -d_t rho_e, v = -d_x psi, u_e = e^{-phi} v.
ElectronField electron_velocity(const FluidState& state);

struct FluidLogSample {
    double time, mass, energy, min_rho;
};

struct FluidRun {
    std::vector<FluidState> snapshots;
    std::vector<ElectronField> electron;
    std::vector<FluidLogSample> log;
    double dt = 0;
};

// Fixed-dt loop of fluid_step with snapshots at the n_snapshots+1 uniform
// times; dt divides the snapshot interval and is at most dt_max (pass the
// kinetic dt / 4 for reference trajectories). Aborts cleanly on VacuumBreach.
FluidRun run_fluid(const SimConfig& cfg, const MacroState& U0, int n_snapshots = 20,
                   const FluidOptions& opts = {}, double dt_max = 0.0);

}  // namespace ivpfp
