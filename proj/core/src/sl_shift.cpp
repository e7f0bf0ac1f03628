#include "ivpfp/sl_shift.hpp"

#include <cmath>

namespace ivpfp {

namespace {

// Cubic Lagrange weights for evaluation at fraction theta in [0,1) between
// stencil points {b-1, b, b+1, b+2}. They sum to 1 for every theta, which is
// what makes the shift conservative.
inline void cubic_weights(double theta, double w[4]) {
    double t = theta;
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t * t - 1.0) * (t - 2.0) / 2.0;
    w[2] = -t * (t + 1.0) * (t - 2.0) / 2.0;
    w[3] = t * (t * t - 1.0) / 6.0;
}

}  // namespace

void shift_periodic_cubic(const double* in, double* out, int n, double shift) {
    double pos0 = -shift;  // departure offset for cell 0
    double b = std::floor(pos0);
    double theta = pos0 - b;
    int base = static_cast<int>(b);
    double w[4];
    cubic_weights(theta, w);
    for (int i = 0; i < n; ++i) {
        int j = base + i;  // departure base index for cell i
        int j0 = (j - 1) % n, j1 = j % n, j2 = (j + 1) % n, j3 = (j + 2) % n;
        if (j0 < 0) j0 += n;
        if (j1 < 0) j1 += n;
        if (j2 < 0) j2 += n;
        if (j3 < 0) j3 += n;
        out[i] = w[0] * in[j0] + w[1] * in[j1] + w[2] * in[j2] + w[3] * in[j3];
    }
}

double shift_zero_inflow_cubic(const double* in, double* out, int n, double shift) {
    double pos0 = -shift;
    double b = std::floor(pos0);
    double theta = pos0 - b;
    int base = static_cast<int>(b);
    double w[4];
    cubic_weights(theta, w);
    double sum_in = 0.0, sum_out = 0.0;
    for (int i = 0; i < n; ++i) sum_in += in[i];
    for (int i = 0; i < n; ++i) {
        int j = base + i;
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
            int idx = j - 1 + k;
            if (idx >= 0 && idx < n) acc += w[k] * in[idx];
        }
        out[i] = acc;
        sum_out += acc;
    }
    return sum_in - sum_out;
}

double shift_zero_inflow_linear(const double* in, double* out, int n, double shift) {
    double pos0 = -shift;
    double b = std::floor(pos0);
    double theta = pos0 - b;
    int base = static_cast<int>(b);
    double sum_in = 0.0, sum_out = 0.0;
    for (int i = 0; i < n; ++i) sum_in += in[i];
    for (int i = 0; i < n; ++i) {
        int j = base + i;
        double acc = 0.0;
        if (j >= 0 && j < n) acc += (1.0 - theta) * in[j];
        if (j + 1 >= 0 && j + 1 < n) acc += theta * in[j + 1];
        out[i] = acc;
        sum_out += acc;
    }
    return sum_in - sum_out;
}

double clip_negative_rebalance(double* f, int n) {
    double neg = 0.0, pos = 0.0;
    for (int i = 0; i < n; ++i) {
        if (f[i] < 0.0)
            neg -= f[i];
        else
            pos += f[i];
    }
    if (neg == 0.0) return 0.0;
    if (pos <= 0.0) {
        for (int i = 0; i < n; ++i) f[i] = 0.0;
        return neg;
    }
    double scale = (pos - neg) / pos;
    if (scale < 0.0) scale = 0.0;
    for (int i = 0; i < n; ++i) f[i] = f[i] < 0.0 ? 0.0 : f[i] * scale;
    return neg;
}

}  // namespace ivpfp
