#include <doctest.h>

#include <cmath>

#include "ivpfp/errors.hpp"
#include "ivpfp/fluid.hpp"
#include "ivpfp/random_fields.hpp"
#include "ivpfp/spectral.hpp"

using namespace ivpfp;

namespace {

MacroState smooth_ic(const SpatialGrid& g, double rho_amp = 0.2, double u_amp = 0.1) {
    Field rho = fourier_field({1.0, rho_amp}, g);
    Field u = fourier_field({0.0, 0.0, u_amp}, g);
    MacroState U(g);
    for (int i = 0; i < g.n_x; ++i) {
        U.rho[i] = rho[i];
        U.momentum[i] = rho[i] * u[i];
    }
    return U;
}

FluidState initial_state(const MacroState& U, double pb_tol = 1e-10) {
    return FluidState{U, solve_pb(U.rho, U.grid, pb_tol), 0.0};
}

}  // namespace

TEST_CASE("fluid_step: constant state is stationary to machine precision") {
    SpatialGrid g(64, 1.0);
    MacroState U(g);
    for (int i = 0; i < g.n_x; ++i) U.rho[i] = 1.0;
    FluidState s = initial_state(U);
    double dt = 1e-3;
    for (int k = 0; k < 50; ++k) s = fluid_step(s, dt, 1.0);
    for (int i = 0; i < g.n_x; ++i) {
        CHECK(std::abs(s.macro.rho[i] - 1.0) < 1e-13);
        CHECK(std::abs(s.macro.momentum[i]) < 1e-13);
    }
}

TEST_CASE("fluid_step: exact mass conservation over 1000 steps") {
    SpatialGrid g(64, 1.0);
    FluidState s = initial_state(smooth_ic(g));
    double mass0 = s.macro.mass();
    double dt = 2e-4;
    for (int k = 0; k < 1000; ++k) s = fluid_step(s, dt, 1.0);
    CHECK(std::abs(s.macro.mass() - mass0) <= 1e-13 * mass0);
}

TEST_CASE("fluid self-convergence under grid refinement, order >= 1") {
    // rho0 = 1 + 0.2 cos(2 pi x), u0 = 0.1 sin(2 pi x), kappa = 1, t = 0.2
    SimConfig cfg;
    cfg.kappa = 1.0;
    cfg.t_end = 0.2;
    std::vector<int> sizes{128, 256, 512};
    std::vector<FluidRun> runs;
    for (int n : sizes) {
        SpatialGrid g(n, 1.0);
        runs.push_back(run_fluid(cfg, smooth_ic(g), 4));
    }
    auto restrict_rho = [&](const Field& fine, int ratio) {
        Field out(fine.size() / ratio);
        for (std::size_t i = 0; i < out.size(); ++i) {
            double s = 0.0;
            for (int k = 0; k < ratio; ++k) s += fine[i * ratio + k];
            out[i] = s / ratio;
        }
        return out;
    };
    Field r128 = runs[0].snapshots.back().macro.rho;
    Field r256 = restrict_rho(runs[1].snapshots.back().macro.rho, 2);
    Field r512 = restrict_rho(runs[2].snapshots.back().macro.rho, 4);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < r128.size(); ++i) {
        e1 += std::abs(r128[i] - r512[i]);
        e2 += std::abs(r256[i] - r512[i]);
    }
    // order >= 1 makes the two-level error ratio approach 2 or better
    CHECK(e2 < e1 / 1.8);
}

TEST_CASE("fluid total energy: zero at the trivial state, small drift on smooth runs") {
    SpatialGrid g(64, 1.0);
    MacroState U(g);
    for (int i = 0; i < g.n_x; ++i) U.rho[i] = 1.0;
    FluidState s0 = initial_state(U);
    CHECK(std::abs(fluid_total_energy(s0, 1.0)) < 1e-12);

    SimConfig cfg;
    cfg.kappa = 1.0;
    cfg.t_end = 0.2;
    SpatialGrid g1(128, 1.0), g2(256, 1.0);
    FluidRun run1 = run_fluid(cfg, smooth_ic(g1), 4);
    FluidRun run2 = run_fluid(cfg, smooth_ic(g2), 4);
    double d1 = std::abs(run1.log.back().energy - run1.log.front().energy);
    double d2 = std::abs(run2.log.back().energy - run2.log.front().energy);
    CHECK(d2 < 0.75 * d1);  // refinement shrinks the drift
    CHECK(d1 < 5.0 * g1.dx());
}

TEST_CASE("fluid energy decreases across a developed steep gradient") {
    SimConfig cfg;
    cfg.kappa = 1.0;
    cfg.t_end = 0.4;
    SpatialGrid g(256, 1.0);
    MacroState U = smooth_ic(g, 0.4, 0.6);  // steepens well within t_end
    FluidRun run = run_fluid(cfg, U, 8);
    CHECK(run.log.back().energy < run.log.front().energy - 1e-5);
}

TEST_CASE("electron velocity: steady constant state gives u_e = 0") {
    SpatialGrid g(64, 1.0);
    MacroState U(g);
    for (int i = 0; i < g.n_x; ++i) U.rho[i] = 1.3;
    FluidState s = initial_state(U);
    ElectronField e = electron_velocity(s);
    for (int i = 0; i < g.n_x; ++i) CHECK(std::abs(e.u_e[i]) < 1e-11);
    CHECK(e.continuity_residual < 1e-11);
}

TEST_CASE("electron velocity: manufactured smooth states") {
    SpatialGrid g(128, 1.0);
    Rng rng(33);
    for (int k = 0; k < 5; ++k) {
        Field rho = random_smooth_positive(rng, g, 1.0, 0.35);
        Field u = random_smooth(rng, g, 0.4);
        MacroState U(g);
        for (int i = 0; i < g.n_x; ++i) {
            U.rho[i] = rho[i];
            U.momentum[i] = rho[i] * u[i];
        }
        FluidState s = initial_state(U);
        ElectronField e = electron_velocity(s);

        double rho_e_norm = l2_norm(e.rho_e, g);
        CHECK(e.continuity_residual <= 1e-8 * rho_e_norm);

        // |u_e| <= e^{||phi||_inf} ||v||_inf with v = rho_e u_e
        Field v(g.n_x);
        for (int i = 0; i < g.n_x; ++i) v[i] = e.rho_e[i] * e.u_e[i];
        double bound = std::exp(linf_norm(s.potential.phi)) * linf_norm(v);
        CHECK(linf_norm(e.u_e) <= bound + 1e-12);
    }
}

TEST_CASE("run_fluid: constant data stays constant, neutrality holds") {
    SimConfig cfg;
    cfg.kappa = 1.0;
    cfg.t_end = 0.1;
    SpatialGrid g(64, 1.0);
    MacroState U(g);
    for (int i = 0; i < g.n_x; ++i) U.rho[i] = 1.0;
    FluidRun run = run_fluid(cfg, U, 5);
    for (const auto& s : run.snapshots)
        for (int i = 0; i < g.n_x; ++i) CHECK(std::abs(s.macro.rho[i] - 1.0) < 1e-12);

    FluidRun run2 = run_fluid(cfg, smooth_ic(g), 5);
    for (const auto& s : run2.snapshots) {
        Field ephi(g.n_x);
        for (int i = 0; i < g.n_x; ++i) ephi[i] = std::exp(s.potential.phi[i]);
        CHECK(std::abs(integrate(ephi, g) - integrate(s.macro.rho, g)) <= 1e-9);
    }
}

TEST_CASE("run_fluid: kappa = 0 runs with pressureless fluxes") {
    SimConfig cfg;
    cfg.kappa = 0.0;
    cfg.t_end = 0.1;
    SpatialGrid g(64, 1.0);
    FluidRun run = run_fluid(cfg, smooth_ic(g), 5);
    CHECK(run.log.back().min_rho > 0.5);
    CHECK(std::abs(run.log.back().mass - run.log.front().mass) < 1e-12);
}

TEST_CASE("run_fluid: dphi_dt consistency with snapshot time differences") {
    SimConfig cfg;
    cfg.kappa = 1.0;
    cfg.t_end = 0.1;
    SpatialGrid g(128, 1.0);
    FluidRun run = run_fluid(cfg, smooth_ic(g), 10);
    double snap_dt = cfg.t_end / 10;
    for (std::size_t s = 1; s + 1 < run.snapshots.size(); ++s) {
        Field rate = dphi_dt(run.snapshots[s].macro, run.snapshots[s].potential.phi);
        double worst = 0.0;
        for (int i = 0; i < g.n_x; ++i) {
            double fd = (run.snapshots[s + 1].potential.phi[i] -
                         run.snapshots[s - 1].potential.phi[i]) /
                        (2.0 * snap_dt);
            worst = std::max(worst, std::abs(fd - rate[i]));
        }
        CHECK(worst < 20.0 * snap_dt);  // O(dt) consistency on smooth runs
    }
}

TEST_CASE("fluid_step: vacuum breach aborts loudly") {
    SpatialGrid g(64, 1.0);
    MacroState U(g);
    for (int i = 0; i < g.n_x; ++i) U.rho[i] = 1.0;
    FluidState s = initial_state(U);
    for (int i = 0; i < g.n_x; ++i) s.macro.rho[i] = 1e-9;  // below rho_floor
    CHECK_THROWS_AS(fluid_step(s, 1e-4, 1.0), VacuumBreach);
}
