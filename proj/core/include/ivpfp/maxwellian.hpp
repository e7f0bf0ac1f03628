#pragma once

#include "ivpfp/distribution.hpp"
#include "ivpfp/field.hpp"

namespace ivpfp {

// Local equilibrium at (rho(x), u(x)):
//   kappa > 0: f_ij = rho_i (2 pi kappa)^{-1/2} exp(-(v_j - u_i)^2 / (2 kappa))
//   kappa = 0: mass rho_i split linearly between the two cells bracketing u_i,
//              so the discrete mean velocity equals u_i exactly.
// Rejects (GridError) when kappa > 0 and v_max^2 < 40 kappa + max|u|^2: the
// velocity domain would clip the Gaussian above mass tolerance.
Distribution maxwellian(const Field& rho, const Field& u, double kappa,
                        const SpatialGrid& xg, const VelocityGrid& vg);

// Convenience overload for spatially constant (rho, u).
Distribution maxwellian(double rho, double u, double kappa, const SpatialGrid& xg,
                        const VelocityGrid& vg);

}  // namespace ivpfp
