#include "ivpfp/field.hpp"

#include <cmath>

namespace ivpfp {

Field fourier_field(const std::vector<double>& coeffs, const SpatialGrid& g) {
    Field f(g.n_x, coeffs.empty() ? 0.0 : coeffs[0]);
    const double two_pi_over_l = 2.0 * M_PI / g.length;
    for (std::size_t c = 1; c < coeffs.size(); ++c) {
        int k = static_cast<int>((c + 1) / 2);
        bool is_cos = (c % 2 == 1);
        if (coeffs[c] == 0.0) continue;
        for (int i = 0; i < g.n_x; ++i) {
            double phase = two_pi_over_l * k * g.center(i);
            f[i] += coeffs[c] * (is_cos ? std::cos(phase) : std::sin(phase));
        }
    }
    return f;
}

}  // namespace ivpfp
