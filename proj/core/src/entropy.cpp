#include "ivpfp/entropy.hpp"

#include <cmath>

namespace ivpfp {

double kinetic_entropy(const Distribution& f, double kappa) {
    const double measure = f.cell_measure();
    const double cst = kappa > 0.0 ? 0.5 * std::log(2.0 * M_PI * kappa) : 0.0;
    double total = 0.0;
    for (int i = 0; i < f.xgrid.n_x; ++i) {
        const double* fi = f.row(i);
        double s = 0.0;
        for (int j = 0; j < f.vgrid.n_v; ++j) {
            double v = f.vgrid.center(j);
            double val = 0.5 * v * v * fi[j];
            if (kappa > 0.0 && fi[j] > 0.0)
                val += kappa * (fi[j] * std::log(std::max(fi[j], entropy_log_clamp)) +
                                cst * fi[j]);
            s += val;
        }
        total += s;
    }
    return total * measure;
}

double macroscopic_entropy(const MacroState& macro, double kappa) {
    double s = 0.0;
    for (int i = 0; i < macro.grid.n_x; ++i) {
        double rho = macro.rho[i];
        double m = macro.momentum[i];
        double kin = rho > vacuum_floor ? 0.5 * m * m / rho : 0.0;
        double ent = (kappa > 0.0 && rho > 0.0)
                         ? kappa * rho * std::log(std::max(rho, entropy_log_clamp))
                         : 0.0;
        s += kin + ent;
    }
    return s * macro.grid.dx();
}

double flogf_floor_constant(const VelocityGrid& vg, double c) {
    // Pointwise per cell: f log f >= -v^2 f/(4c) wherever f >= e^{-v^2/4c};
    // below that threshold, f log f >= -(v^2/4c) e^{-v^2/4c} for |v| >= 2 sqrt(c)
    // (s log s decreasing on (0, 1/e)) and >= -1/e for |v| < 2 sqrt(c).
    const double dv = vg.dv();
    double outer = 0.0, inner = 0.0;
    for (int j = 0; j < vg.n_v; ++j) {
        double v = vg.center(j);
        if (std::abs(v) >= 2.0 * std::sqrt(c))
            outer += (v * v / (4.0 * c)) * std::exp(-v * v / (4.0 * c));
        else
            inner += 1.0 / M_E;
    }
    return (outer + inner) * dv;
}

double moment_bound_constant(const VelocityGrid& vg, double kappa) {
    if (kappa <= 0.0) return 0.0;
    // kappa * flogf floor at c = kappa gives the -v^2/4 piece of H_kappa; the
    // log(2 pi kappa) mass term only hurts when 2 pi kappa < 1.
    double c1 = kappa * flogf_floor_constant(vg, kappa);
    double c2 = 0.5 * kappa * std::max(0.0, -std::log(2.0 * M_PI * kappa));
    return c1 + c2;
}

}  // namespace ivpfp
