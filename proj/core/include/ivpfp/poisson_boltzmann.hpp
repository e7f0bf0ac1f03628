#pragma once

#include <vector>

#include "ivpfp/field.hpp"
#include "ivpfp/grid.hpp"
#include "ivpfp/macro.hpp"

namespace ivpfp {

// Electrostatic potential state: -Lap phi = rho - e^phi on the torus,
// E = -d phi/dx, residual_norm = L2 norm of the defect at acceptance.
struct Potential {
    Field phi;
    Field e_field;
    double residual_norm = 0.0;
};

// Damped Newton iteration on G(phi) = -Lap phi - rho + e^phi with the spectral
// Laplacian; initial guess phi = log(mean rho), step halved until the residual
// decreases. On acceptance the neutrality identity |int e^phi - int rho| and
// the L1/L2 contraction of e^phi against rho are checked to 10*tol.
// residual_history (optional) records ||G|| after every accepted step.
Potential solve_pb(const Field& rho, const SpatialGrid& g, double tol = 1e-10,
                   int max_iter = 50, std::vector<double>* residual_history = nullptr);

// Solves (-Lap + e^phi) psi = rhs by shifted-Helmholtz fixed-point sweeps;
// the operator is coercive since e^phi > 0. Residual tolerance is
// tol * max(1, ||rhs||_2).
Field solve_linearized(const Field& phi, const Field& rhs, const SpatialGrid& g,
                       double tol = 1e-12, int max_iter = 4000);

// E = -d phi/dx, spectral; mean(E) = 0 exactly.
Field electric_field(const Field& phi, const SpatialGrid& g);

// Time derivative of the potential under the continuity equation:
// (-Lap + e^phi) dphi/dt = -d(rho u)/dx.
Field dphi_dt(const MacroState& macro, const Field& phi);

struct StabilityPair {
    double lhs;       // int |grad phi_1 - grad phi_2|^2
    double rhs_core;  // int |rho_1 - rho_2|^2
};

// Evaluates both sides of the p = 2 stability estimate for a pair of
// admissible densities; the harness asserts lhs <= C * rhs_core with a
// fitted constant.
StabilityPair stability_check(const Field& rho1, const Field& rho2, const SpatialGrid& g,
                              double tol = 1e-10);

}  // namespace ivpfp
