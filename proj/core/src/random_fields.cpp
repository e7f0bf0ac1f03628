#include "ivpfp/random_fields.hpp"

#include <cmath>

#include "ivpfp/maxwellian.hpp"

namespace ivpfp {

Field random_smooth(Rng& rng, const SpatialGrid& g, double amplitude, int max_mode) {
    std::vector<double> a(max_mode), b(max_mode);
    double weight = 0.0;
    for (int k = 0; k < max_mode; ++k) {
        a[k] = rng.uniform(-1.0, 1.0) / (k + 1);
        b[k] = rng.uniform(-1.0, 1.0) / (k + 1);
        weight += std::abs(a[k]) + std::abs(b[k]);
    }
    double scale = weight > 0.0 ? amplitude / weight : 0.0;
    Field f(g.n_x, 0.0);
    for (int i = 0; i < g.n_x; ++i) {
        double x = g.center(i);
        double s = 0.0;
        for (int k = 0; k < max_mode; ++k) {
            double phase = 2.0 * M_PI * (k + 1) * x / g.length;
            s += a[k] * std::cos(phase) + b[k] * std::sin(phase);
        }
        f[i] = scale * s;
    }
    return f;
}

Field random_smooth_positive(Rng& rng, const SpatialGrid& g, double base,
                             double amplitude, int max_mode) {
    Field f = random_smooth(rng, g, std::min(amplitude, 0.9 * base), max_mode);
    for (double& v : f) v += base;
    return f;
}

Distribution random_smooth_distribution(Rng& rng, const SpatialGrid& xg,
                                        const VelocityGrid& vg, double kappa_scale) {
    Field rho = random_smooth_positive(rng, xg, 1.0, 0.4);
    Field u = random_smooth(rng, xg, 0.5);
    double temp = kappa_scale * rng.uniform(0.6, 1.4);
    // Respect the velocity-domain rule v_max^2 >= 40 temp + max|u|^2.
    double temp_cap = (vg.v_max * vg.v_max - linf_norm(u) * linf_norm(u)) / 40.0 * 0.99;
    temp = std::min(temp, temp_cap);
    Distribution f = maxwellian(rho, u, temp, xg, vg);

    // Positive band-limited modulation in (x, v); keeps f strictly positive.
    double amp = rng.uniform(0.05, 0.3);
    int kx = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
    int kv = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
    double px = rng.uniform(0.0, 2.0 * M_PI);
    double pv = rng.uniform(0.0, 2.0 * M_PI);
    for (int i = 0; i < xg.n_x; ++i) {
        double cx = std::cos(2.0 * M_PI * kx * xg.center(i) / xg.length + px);
        for (int j = 0; j < vg.n_v; ++j) {
            double cv = std::cos(M_PI * kv * vg.center(j) / vg.v_max + pv);
            f(i, j) *= 1.0 + amp * cx * cv;
        }
    }
    return f;
}

}  // namespace ivpfp
