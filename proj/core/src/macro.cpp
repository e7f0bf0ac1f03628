#include "ivpfp/macro.hpp"

#include <cmath>

namespace ivpfp {

MacroState moments(const Distribution& f) {
    MacroState out(f.xgrid);
    const int nv = f.vgrid.n_v;
    const double dv = f.vgrid.dv();
    for (int i = 0; i < f.xgrid.n_x; ++i) {
        const double* fi = f.row(i);
        double r = 0.0, m = 0.0;
        for (int j = 0; j < nv; ++j) {
            r += fi[j];
            m += f.vgrid.center(j) * fi[j];
        }
        out.rho[i] = r * dv;
        out.momentum[i] = m * dv;
    }
    return out;
}

Field bulk_velocity(const MacroState& macro) {
    Field u(macro.grid.n_x, 0.0);
    for (int i = 0; i < macro.grid.n_x; ++i)
        u[i] = macro.rho[i] > vacuum_floor ? macro.momentum[i] / macro.rho[i] : 0.0;
    return u;
}

Field regularized_bulk_velocity(const MacroState& macro, double epsilon) {
    if (epsilon == 0.0) return bulk_velocity(macro);
    Field u(macro.grid.n_x, 0.0);
    for (int i = 0; i < macro.grid.n_x; ++i) {
        double m = macro.momentum[i];
        u[i] = m / (macro.rho[i] + epsilon * (1.0 + std::abs(m)));
    }
    return u;
}

}  // namespace ivpfp
