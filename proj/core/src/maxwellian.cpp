#include "ivpfp/maxwellian.hpp"

#include <cmath>

#include "ivpfp/errors.hpp"

namespace ivpfp {

Distribution maxwellian(const Field& rho, const Field& u, double kappa,
                        const SpatialGrid& xg, const VelocityGrid& vg) {
    if (static_cast<int>(rho.size()) != xg.n_x || static_cast<int>(u.size()) != xg.n_x)
        throw GridError("maxwellian: field size does not match grid");

    double u_max = 0.0;
    for (double v : u) u_max = std::max(u_max, std::abs(v));

    Distribution f(xg, vg);
    const double dv = vg.dv();

    if (kappa > 0.0) {
        // 40 kappa ~ (6.3 sigma)^2: Gaussian tail mass beyond the truncated
        // domain stays under 1e-12 of the total.
        if (vg.v_max * vg.v_max < 40.0 * kappa + u_max * u_max)
            throw GridError("maxwellian: velocity domain too small for kappa and |u|");
        const double norm = 1.0 / std::sqrt(2.0 * M_PI * kappa);
        for (int i = 0; i < xg.n_x; ++i) {
            double* fi = f.row(i);
            for (int j = 0; j < vg.n_v; ++j) {
                double w = vg.center(j) - u[i];
                fi[j] = rho[i] * norm * std::exp(-w * w / (2.0 * kappa));
            }
        }
        return f;
    }

    // kappa = 0: the Dirac mass is not grid-representable; split rho_i between
    // the two cells bracketing u_i with linear weights, which reproduces the
    // first moment exactly.
    for (int i = 0; i < xg.n_x; ++i) {
        if (rho[i] == 0.0) continue;
        double pos = (u[i] - vg.center(0)) / dv;  // in cell-index units
        if (pos < 0.0 || pos > vg.n_v - 1)
            throw GridError("maxwellian: monokinetic u outside the cell-center range");
        int j0 = static_cast<int>(std::floor(pos));
        if (j0 == vg.n_v - 1) j0 -= 1;
        double theta = pos - j0;
        f(i, j0) += rho[i] * (1.0 - theta) / dv;
        f(i, j0 + 1) += rho[i] * theta / dv;
    }
    return f;
}

Distribution maxwellian(double rho, double u, double kappa, const SpatialGrid& xg,
                        const VelocityGrid& vg) {
    return maxwellian(Field(xg.n_x, rho), Field(xg.n_x, u), kappa, xg, vg);
}

}  // namespace ivpfp
