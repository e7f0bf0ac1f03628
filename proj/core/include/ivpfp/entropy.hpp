#pragma once

#include "ivpfp/distribution.hpp"
#include "ivpfp/macro.hpp"

namespace ivpfp {

// f is clamped here before taking logs; with the 0 log 0 = 0 convention the
// clamp never changes a nonzero integrand.
inline constexpr double entropy_log_clamp = 1e-300;

// Kinetic entropy integral (d = 1):
//   iint [ v^2/2 f + kappa (f log f + 1/2 log(2 pi kappa) f) ] dx dv,
// with the parenthesized part dropped at kappa = 0.
double kinetic_entropy(const Distribution& f, double kappa);

// Macroscopic entropy integral: int [ rho |u|^2 / 2 + kappa rho log rho ] dx.
double macroscopic_entropy(const MacroState& macro, double kappa);

// Grid constant C_{c,1} of the pointwise f log f floor
//   sum_j f_j log f_j dv >= -sum_j v_j^2 f_j / (4c) dv - C_{c,1}
// assembled as the two proof integrals quadratured on the given grid:
// the Gaussian envelope piece over |v| >= 2 sqrt(c) plus the 1/e floor over
// |v| < 2 sqrt(c). The inequality holds for every nonnegative grid function
// because the underlying bounds are pointwise per cell.
double flogf_floor_constant(const VelocityGrid& vg, double c);

// C'_{kappa,1} for the uniform-in-time second-moment and dissipation bounds:
//   iint |v|^2 f(t) <= 4 (E[f0] + C' (1 + mass)),
//   (1/tau) int_0^t iint D   <= E[f0] + C' (1 + mass).
// Zero at kappa = 0.
double moment_bound_constant(const VelocityGrid& vg, double kappa);

}  // namespace ivpfp
