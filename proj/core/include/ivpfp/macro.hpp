#pragma once

#include "ivpfp/distribution.hpp"
#include "ivpfp/field.hpp"

namespace ivpfp {

// Cells with rho below this are treated as vacuum: u_f = 0 there.
inline constexpr double vacuum_floor = 1e-14;

// Conservative fluid state U = (rho, m) with m = rho u.
struct MacroState {
    SpatialGrid grid;
    Field rho;
    Field momentum;

    MacroState(const SpatialGrid& g) : grid(g), rho(g.n_x, 0.0), momentum(g.n_x, 0.0) {}
    MacroState(const SpatialGrid& g, Field r, Field m)
        : grid(g), rho(std::move(r)), momentum(std::move(m)) {}

    double mass() const { return integrate(rho, grid); }
};

// rho_i = sum_j f_ij dv, m_i = sum_j v_j f_ij dv.
MacroState moments(const Distribution& f);

// u_i = m_i / rho_i where rho_i > vacuum_floor, 0 otherwise.
Field bulk_velocity(const MacroState& macro);

// u^(eps)_i = m_i / (rho_i + eps (1 + |m_i|)); bounded by min(|u_f|, 1/eps).
// eps = 0 falls back to the bulk_velocity vacuum convention.
Field regularized_bulk_velocity(const MacroState& macro, double epsilon);

}  // namespace ivpfp
