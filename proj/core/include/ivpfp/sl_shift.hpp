#pragma once

#include <cstddef>

namespace ivpfp {

// Conservative semi-Lagrangian shift of a uniformly sampled profile by
// `shift` cells (any real number), 4-point cubic Lagrange interpolation.
// Interpolation weights sum to 1, so the periodic variant conserves the row
// sum exactly; the zero-inflow variant loses exactly the outflow.

// Periodic wrap. out and in must not alias; n >= 4.
void shift_periodic_cubic(const double* in, double* out, int n, double shift);

// Zero inflow at both ends; returns sum(in) - sum(out) (the signed outflow,
// in plain cell-sum units).
double shift_zero_inflow_cubic(const double* in, double* out, int n, double shift);

// Linear-interpolation variant of the zero-inflow shift (positivity
// preserving); used for the tiny post-collision momentum correction.
double shift_zero_inflow_linear(const double* in, double* out, int n, double shift);

// Clips negative entries to zero and rescales the positive part so the sum is
// preserved. Returns the clipped magnitude (cell-sum units).
double clip_negative_rebalance(double* f, int n);

}  // namespace ivpfp
