#include "ivpfp/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <mutex>

#include "ivpfp/errors.hpp"

namespace ivpfp {

namespace {
// FFTW plan creation is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct Spectral1D::Impl {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    int n = 0;

    explicit Impl(int n_) : n(n_) {
        real = fftw_alloc_real(n);
        spec = fftw_alloc_complex(n / 2 + 1);
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
    }
    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spec);
    }
};

Spectral1D::Spectral1D(int n, double length) : n_(n), length_(length) {
    if (n < 4) throw GridError("Spectral1D: n must be >= 4");
    impl_ = std::make_unique<Impl>(n);
}

Spectral1D::~Spectral1D() = default;

namespace {
using Cplx = std::complex<double>;

inline Cplx* as_cplx(fftw_complex* p) { return reinterpret_cast<Cplx*>(p); }
}  // namespace

Field Spectral1D::derivative(const Field& f) {
    std::memcpy(impl_->real, f.data(), sizeof(double) * n_);
    fftw_execute(impl_->fwd);
    Cplx* c = as_cplx(impl_->spec);
    const int nk = n_ / 2 + 1;
    const double base = 2.0 * M_PI / length_;
    for (int k = 0; k < nk; ++k) {
        // Nyquist mode has no well-defined odd derivative on the real grid.
        if (2 * k == n_) {
            c[k] = 0.0;
            continue;
        }
        c[k] *= Cplx(0.0, base * k);
    }
    fftw_execute(impl_->bwd);
    Field out(n_);
    for (int i = 0; i < n_; ++i) out[i] = impl_->real[i] / n_;
    return out;
}

Field Spectral1D::laplacian(const Field& f) {
    std::memcpy(impl_->real, f.data(), sizeof(double) * n_);
    fftw_execute(impl_->fwd);
    Cplx* c = as_cplx(impl_->spec);
    const int nk = n_ / 2 + 1;
    const double base = 2.0 * M_PI / length_;
    for (int k = 0; k < nk; ++k) c[k] *= -(base * k) * (base * k);
    fftw_execute(impl_->bwd);
    Field out(n_);
    for (int i = 0; i < n_; ++i) out[i] = impl_->real[i] / n_;
    return out;
}

Field Spectral1D::inv_helmholtz(const Field& g, double shift) {
    if (!(shift > 0)) throw GridError("inv_helmholtz: shift must be positive");
    std::memcpy(impl_->real, g.data(), sizeof(double) * n_);
    fftw_execute(impl_->fwd);
    Cplx* c = as_cplx(impl_->spec);
    const int nk = n_ / 2 + 1;
    const double base = 2.0 * M_PI / length_;
    for (int k = 0; k < nk; ++k) c[k] /= (base * k) * (base * k) + shift;
    fftw_execute(impl_->bwd);
    Field out(n_);
    for (int i = 0; i < n_; ++i) out[i] = impl_->real[i] / n_;
    return out;
}

void Spectral1D::inv_helmholtz_with_lap(const Field& g, double shift, Field& psi,
                                        Field& lap_psi) {
    if (!(shift > 0)) throw GridError("inv_helmholtz_with_lap: shift must be positive");
    std::memcpy(impl_->real, g.data(), sizeof(double) * n_);
    fftw_execute(impl_->fwd);
    Cplx* c = as_cplx(impl_->spec);
    const int nk = n_ / 2 + 1;
    const double base = 2.0 * M_PI / length_;
    std::vector<Cplx> modes(nk);
    for (int k = 0; k < nk; ++k) {
        modes[k] = c[k] / ((base * k) * (base * k) + shift);
    }
    for (int k = 0; k < nk; ++k) c[k] = modes[k];
    fftw_execute(impl_->bwd);
    psi.resize(n_);
    for (int i = 0; i < n_; ++i) psi[i] = impl_->real[i] / n_;
    for (int k = 0; k < nk; ++k) c[k] = -(base * k) * (base * k) * modes[k];
    fftw_execute(impl_->bwd);
    lap_psi.resize(n_);
    for (int i = 0; i < n_; ++i) lap_psi[i] = impl_->real[i] / n_;
}

Field Spectral1D::poisson_zero_mean(const Field& g) {
    std::memcpy(impl_->real, g.data(), sizeof(double) * n_);
    fftw_execute(impl_->fwd);
    Cplx* c = as_cplx(impl_->spec);
    const int nk = n_ / 2 + 1;
    const double base = 2.0 * M_PI / length_;
    c[0] = 0.0;
    for (int k = 1; k < nk; ++k) c[k] /= (base * k) * (base * k);
    fftw_execute(impl_->bwd);
    Field out(n_);
    for (int i = 0; i < n_; ++i) out[i] = impl_->real[i] / n_;
    return out;
}

Field Spectral1D::mollify(const Field& f, double eps) {
    if (eps <= 0.0) return f;
    const double dx = length_ / n_;
    const int radius = std::max(1, static_cast<int>(std::ceil(eps / dx)));
    // Truncated Gaussian of support ~eps, discrete weights renormalized so
    // the convolution conserves the mean exactly.
    std::vector<double> w(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        double r = k * dx / eps;
        w[k + radius] = std::exp(-4.5 * r * r);
        sum += w[k + radius];
    }
    for (double& v : w) v /= sum;
    Field out(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
            int j = i + k;
            j %= n_;
            if (j < 0) j += n_;
            acc += w[k + radius] * f[j];
        }
        out[i] = acc;
    }
    return out;
}

Spectral1D& spectral_for(const SpatialGrid& g) {
    thread_local std::map<std::pair<int, double>, std::unique_ptr<Spectral1D>> cache;
    auto key = std::make_pair(g.n_x, g.length);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<Spectral1D>(g.n_x, g.length)).first;
    return *it->second;
}

}  // namespace ivpfp
