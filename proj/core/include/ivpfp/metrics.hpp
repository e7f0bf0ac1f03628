#pragma once

#include "ivpfp/distribution.hpp"
#include "ivpfp/fluid.hpp"
#include "ivpfp/kinetic.hpp"
#include "ivpfp/macro.hpp"

namespace ivpfp {

// Extended state (rho, m, -grad phi, e^phi) on which the total energy is
// convex; e_field stores -d phi/dx.
struct AugmentedState {
    SpatialGrid grid;
    Field rho;
    Field momentum;
    Field e_field;
    Field rho_e;
};

AugmentedState augment(const KineticState& s);
AugmentedState augment(const FluidState& s);

struct ModulatedEnergyReport {
    double kinetic_term = 0;   // int rho^t |u^t - u|^2 / 2
    double pressure_term = 0;  // kappa int P(rho^t | rho)
    double field_term = 0;     // int |grad(phi^t - phi)|^2 / 2
    double electron_term = 0;  // int P(rho_e^t | rho_e)
    double total = 0;
    double time = 0;
};

// int [ p log(p/q) - p + q ] dx with 0 log 0 = 0; q must be positive.
double relative_pressure(const Field& p, const Field& q, const SpatialGrid& g);

// First-order Taylor gap of the convex energy on the augmented state. The
// electron term is evaluated as int e^{phi^t}(phi^t - phi) - (e^{phi^t} - e^phi)
// with phi = log rho_e, identical to the relative pressure of the electron
// densities.
ModulatedEnergyReport modulated_energy(const AugmentedState& trial,
                                       const AugmentedState& reference, double kappa,
                                       double time = 0);

struct BoundPair {
    double lhs = 0, rhs = 0;
};

// lhs = ||rho1 - rho2||_L1, rhs = sqrt(2) (int rho1 + rho2)^{1/2} (int P(rho1|rho2))^{1/2}.
BoundPair l1_density_bound(const Field& rho1, const Field& rho2, const SpatialGrid& g);

struct MomentumBounds {
    BoundPair momentum;  // || rho^t u^t - rho u ||_L1 vs its bound
    BoundPair stress;    // || rho^t u^t u^t - rho u u ||_L1 vs its bound
};

// Both sides of the two moment-error inequalities; u_ref_sup must dominate
// ||u||_inf of the reference.
MomentumBounds momentum_error_bounds(const MacroState& trial, const MacroState& ref,
                                     double u_ref_sup);

// iint f log(f / M_kappa^{(rho,u)}) dx dv, kappa > 0, rho > 0 required.
double kl_to_maxwellian(const Distribution& f, const Field& rho, const Field& u,
                        double kappa);

// lhs = kappa iint f log(f / M^{(rho_f, u)}), rhs = (1/2) iint |kappa d_v f - (u-v) f|^2 / f.
BoundPair log_sobolev_check(const Distribution& f, const Field& u, double kappa);

// lhs = ||f - g||_L1^2, rhs = 2 (iint f) iint f log(f/g); masses must agree.
BoundPair csiszar_kullback_check(const Distribution& f, const Distribution& g);

// 1D periodic W1 via the cyclic CDF formula: min over offsets of
// int |CDF_mu - CDF_nu - offset| dx; masses must agree to 1e-10.
double w1_distance_1d(const Field& mu, const Field& nu, const SpatialGrid& g);

// Computable upper bound for the phase-space bounded-Lipschitz distance of f
// against the monokinetic state rho delta(v - u):
//   sqrt(mass) [ spread + drift ] + C w1(rho_f, rho),  C = 1 + ||u||_{W^{1,inf}}.
struct PhaseSpaceBlBound {
    double spread_term = 0;      // (iint |v - u^t|^2 f)^{1/2}
    double drift_term = 0;       // (int rho^t |u^t - u|^2)^{1/2}
    double w1_term = 0;          // w1(rho^t, rho)
    double lipschitz_const = 0;  // 1 + ||u||_inf + ||d_x u||_inf
    double total = 0;
};

PhaseSpaceBlBound dbl_phase_space(const Distribution& f, const Field& rho, const Field& u);

struct CriticalTermCheck {
    double lhs = 0;           // | int (rho_e^t - rho_e) ubar d_x(phi^t - phi) |
    double rhs_pressure = 0;  // int P(rho_e^t | rho_e)
    double rhs_grad = 0;      // int |d_x(phi^t - phi)|^2
};

CriticalTermCheck critical_term_check(const Field& rho_e_trial, const Field& rho_e_ref,
                                      const Field& u_bar, const Field& phi_trial,
                                      const Field& phi_ref, const SpatialGrid& g);

}  // namespace ivpfp
