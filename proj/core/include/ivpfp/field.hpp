#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ivpfp/grid.hpp"

namespace ivpfp {

// A scalar field sampled at the spatial cell centers.
using Field = std::vector<double>;

// Neumaier compensated sum; used wherever round-off level conservation
// statements are checked against 1e-14 style tolerances.
inline double compensated_sum(const double* v, std::size_t n) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = s + v[i];
        if (std::abs(s) >= std::abs(v[i]))
            c += (s - t) + v[i];
        else
            c += (v[i] - t) + s;
        s = t;
    }
    return s + c;
}

inline double compensated_sum(const Field& v) { return compensated_sum(v.data(), v.size()); }

inline double integrate(const Field& f, const SpatialGrid& g) {
    return compensated_sum(f) * g.dx();
}

inline double mean(const Field& f, const SpatialGrid& g) {
    return integrate(f, g) / g.length;
}

inline double l1_norm(const Field& f, const SpatialGrid& g) {
    double s = 0.0;
    for (double v : f) s += std::abs(v);
    return s * g.dx();
}

inline double l2_norm(const Field& f, const SpatialGrid& g) {
    double s = 0.0;
    for (double v : f) s += v * v;
    return std::sqrt(s * g.dx());
}

inline double linf_norm(const Field& f) {
    double s = 0.0;
    for (double v : f) s = std::max(s, std::abs(v));
    return s;
}

// Synthesizes c0 + sum_k [ c_{2k-1} cos(2 pi k x / L) + c_{2k} sin(2 pi k x / L) ]
// from a flat coefficient list {c0, c1cos, c1sin, c2cos, c2sin, ...}.
Field fourier_field(const std::vector<double>& coeffs, const SpatialGrid& g);

}  // namespace ivpfp
