#pragma once

#include <vector>

#include "ivpfp/field.hpp"
#include "ivpfp/grid.hpp"

namespace ivpfp {

// Phase-space density f(x, v) on the tensor grid, stored row-major with x
// outer and v inner, so f(i, :) is the contiguous velocity profile at x_i.
struct Distribution {
    SpatialGrid xgrid;
    VelocityGrid vgrid;
    std::vector<double> values;

    Distribution(const SpatialGrid& xg, const VelocityGrid& vg)
        : xgrid(xg), vgrid(vg), values(static_cast<std::size_t>(xg.n_x) * vg.n_v, 0.0) {}

    double& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * vgrid.n_v + j]; }
    double operator()(int i, int j) const {
        return values[static_cast<std::size_t>(i) * vgrid.n_v + j];
    }
    double* row(int i) { return values.data() + static_cast<std::size_t>(i) * vgrid.n_v; }
    const double* row(int i) const {
        return values.data() + static_cast<std::size_t>(i) * vgrid.n_v;
    }

    double cell_measure() const { return xgrid.dx() * vgrid.dv(); }

    double mass() const { return compensated_sum(values) * cell_measure(); }

    // Mass sitting in the two outermost velocity cells; monitored against
    // boundary_mass_tol so truncation artifacts abort loudly.
    double boundary_mass() const {
        double s = 0.0;
        for (int i = 0; i < xgrid.n_x; ++i)
            s += (*this)(i, 0) + (*this)(i, vgrid.n_v - 1);
        return s * cell_measure();
    }

    double min_value() const {
        double m = 0.0;
        for (double v : values) m = std::min(m, v);
        return m;
    }
};

}  // namespace ivpfp
