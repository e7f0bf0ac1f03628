#pragma once

#include <cstdint>
#include <random>

#include "ivpfp/distribution.hpp"
#include "ivpfp/field.hpp"

namespace ivpfp {

// Seeded generator for the randomized property suites. Only uniform draws
// from the raw engine are used so streams are stable across standard-library
// implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double a, double b) {
        // 53-bit mantissa draw in [0, 1).
        double u = (gen_() >> 11) * 0x1.0p-53;
        return a + (b - a) * u;
    }
    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
};

// base + random band-limited perturbation; positive by construction when
// amplitude < base (per-mode amplitudes shrink with k).
Field random_smooth_positive(Rng& rng, const SpatialGrid& g, double base,
                             double amplitude, int max_mode = 4);

// Zero-mean random band-limited field with sup roughly `amplitude`.
Field random_smooth(Rng& rng, const SpatialGrid& g, double amplitude, int max_mode = 4);

// Positive smooth phase-space density: Maxwellian at random smooth (rho, u)
// and temperature in [0.5, 1.5] * kappa_scale, modulated by a positive
// band-limited factor in (x, v).
Distribution random_smooth_distribution(Rng& rng, const SpatialGrid& xg,
                                        const VelocityGrid& vg, double kappa_scale);

}  // namespace ivpfp
