#pragma once

#include <memory>

#include "ivpfp/field.hpp"
#include "ivpfp/grid.hpp"

namespace ivpfp {

// Fourier transforms and constant-coefficient elliptic inverses on the
// periodic grid. One instance owns its FFT plans and buffers and is not
// thread-safe; use spectral_for() which hands out a thread-local instance
// per grid size.
class Spectral1D {
  public:
    Spectral1D(int n, double length);
    ~Spectral1D();
    Spectral1D(const Spectral1D&) = delete;
    Spectral1D& operator=(const Spectral1D&) = delete;

    int size() const { return n_; }

    Field derivative(const Field& f);                    // d/dx, Nyquist zeroed
    Field laplacian(const Field& f);                     // d^2/dx^2
    Field inv_helmholtz(const Field& g, double shift);   // (-Lap + shift)^{-1} g, shift > 0
    // Same solve, also synthesizing Lap(psi) from the identical mode array:
    // the residual evaluated with this Laplacian avoids the k^2-amplified
    // round-off of a second forward transform.
    void inv_helmholtz_with_lap(const Field& g, double shift, Field& psi, Field& lap_psi);
    // Zero-mean solution of -Lap psi = g; the k = 0 mode of g is discarded.
    Field poisson_zero_mean(const Field& g);
    // Convolution with a truncated Gaussian kernel of support radius eps,
    // renormalized to unit mass (conservative smoothing).
    Field mollify(const Field& f, double eps);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int n_;
    double length_;
};

Spectral1D& spectral_for(const SpatialGrid& g);

}  // namespace ivpfp
