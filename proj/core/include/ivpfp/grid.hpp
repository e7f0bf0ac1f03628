#pragma once

#include <cmath>

#include "ivpfp/errors.hpp"

namespace ivpfp {

// Uniform periodic grid on the torus [0, length), cell-centered:
// x_i = (i + 1/2) dx, i = 0..n_x-1.
struct SpatialGrid {
    int n_x;
    double length;

    explicit SpatialGrid(int nx, double len = 1.0) : n_x(nx), length(len) {
        if (n_x < 4) throw GridError("SpatialGrid: n_x must be >= 4");
        if (!(length > 0)) throw GridError("SpatialGrid: length must be positive");
    }

    double dx() const { return length / n_x; }
    double center(int i) const { return (i + 0.5) * dx(); }
    int wrap(int i) const {
        int m = i % n_x;
        return m < 0 ? m + n_x : m;
    }
    bool operator==(const SpatialGrid& o) const {
        return n_x == o.n_x && length == o.length;
    }
};

// Uniform truncated velocity grid on [-v_max, v_max], cell-centered and
// symmetric about v = 0: v_j = -v_max + (j + 1/2) dv, so v_{n-1-j} = -v_j.
struct VelocityGrid {
    int n_v;
    double v_max;

    explicit VelocityGrid(int nv, double vmax) : n_v(nv), v_max(vmax) {
        if (n_v < 8) throw GridError("VelocityGrid: n_v must be >= 8");
        if (!(v_max > 0)) throw GridError("VelocityGrid: v_max must be positive");
    }

    double dv() const { return 2.0 * v_max / n_v; }
    double center(int j) const { return -v_max + (j + 0.5) * dv(); }
    // Face velocity between cells j and j+1.
    double face(int j) const { return -v_max + (j + 1.0) * dv(); }
    bool operator==(const VelocityGrid& o) const {
        return n_v == o.n_v && v_max == o.v_max;
    }
};

}  // namespace ivpfp
