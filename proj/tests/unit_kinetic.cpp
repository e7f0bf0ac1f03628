#include <doctest.h>

#include <cmath>

#include "ivpfp/entropy.hpp"
#include "ivpfp/errors.hpp"
#include "ivpfp/kinetic.hpp"
#include "ivpfp/maxwellian.hpp"
#include "ivpfp/random_fields.hpp"

using namespace ivpfp;

namespace {

const SpatialGrid XG(32, 1.0);
const VelocityGrid VG(64, 8.0);

Distribution perturbed_maxwellian(Rng& rng, double kappa) {
    Field rho = random_smooth_positive(rng, XG, 1.0, 0.3);
    Field u = random_smooth(rng, XG, 0.3);
    return maxwellian(rho, u, kappa, XG, VG);
}

}  // namespace

TEST_CASE("transport: integer shift is an exact circular shift") {
    Rng rng(3);
    Distribution f = perturbed_maxwellian(rng, 1.0);
    int j = 40;  // v_40 = 2.125 on this grid
    double v = VG.center(j);
    int cells = 3;
    double dt = cells * XG.dx() / v;
    Distribution g = step_transport_x(f, dt);
    for (int i = 0; i < XG.n_x; ++i)
        CHECK(g(i, j) == doctest::Approx(f(XG.wrap(i - cells), j)).epsilon(1e-15));
}

TEST_CASE("transport: constant-in-x rows unchanged, mass preserved per row") {
    Distribution f(XG, VG);
    for (int i = 0; i < XG.n_x; ++i)
        for (int j = 0; j < VG.n_v; ++j) f(i, j) = 1.0 + 0.01 * j;
    Distribution g = step_transport_x(f, 7.7e-4);
    for (int i = 0; i < XG.n_x; ++i)
        for (int j = 0; j < VG.n_v; ++j)
            CHECK(g(i, j) == doctest::Approx(f(i, j)).epsilon(1e-13));

    Rng rng(5);
    Distribution h = perturbed_maxwellian(rng, 1.0);
    Distribution h2 = step_transport_x(h, 6.1e-4);
    for (int j = 0; j < VG.n_v; ++j) {
        double before = 0.0, after = 0.0;
        for (int i = 0; i < XG.n_x; ++i) {
            before += h(i, j);
            after += h2(i, j);
        }
        CHECK(after == doctest::Approx(before).epsilon(1e-13));
    }
}

TEST_CASE("transport: two half-steps agree with one full step on smooth data") {
    Rng rng(7);
    Distribution f = perturbed_maxwellian(rng, 1.0);
    double dt = 0.4 * XG.dx() / VG.v_max;
    Distribution full = step_transport_x(f, dt);
    Distribution half = step_transport_x(step_transport_x(f, 0.5 * dt), 0.5 * dt);
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        worst = std::max(worst, std::abs(full.values[k] - half.values[k]));
        scale = std::max(scale, f.values[k]);
    }
    CHECK(worst <= scale * XG.dx() * XG.dx());
}

TEST_CASE("accel: zero field is the identity") {
    Rng rng(9);
    Distribution f = perturbed_maxwellian(rng, 1.0);
    double leak = 0.0;
    Distribution g = step_accel_v(f, Field(XG.n_x, 0.0), 1e-3, &leak);
    for (std::size_t k = 0; k < f.values.size(); ++k)
        CHECK(g.values[k] == doctest::Approx(f.values[k]).epsilon(1e-15));
    CHECK(leak == 0.0);
}

TEST_CASE("accel: constant field shifts the mean velocity by E dt") {
    Rng rng(11);
    Distribution f = perturbed_maxwellian(rng, 0.5);
    Field e(XG.n_x, 0.8);
    double dt = 1e-2;
    double leak = 0.0;
    Distribution g = step_accel_v(f, e, dt, &leak);
    MacroState before = moments(f), after = moments(g);
    for (int i = 0; i < XG.n_x; ++i) {
        double du = after.momentum[i] / after.rho[i] - before.momentum[i] / before.rho[i];
        CHECK(std::abs(du - 0.8 * dt) <= VG.dv() * VG.dv());
    }
}

TEST_CASE("accel: mass decrease equals recorded leak") {
    Rng rng(13);
    Distribution f = perturbed_maxwellian(rng, 1.0);
    Field e(XG.n_x, 5.0);  // push hard so tail mass actually leaves
    double leak = 0.0;
    Distribution g = step_accel_v(f, e, 0.05, &leak);
    CHECK(f.mass() - g.mass() == doctest::Approx(leak).epsilon(1e-10));
}

TEST_CASE("collision: discrete Maxwellian is a fixed point") {
    Rng rng(17);
    Field rho = random_smooth_positive(rng, XG, 1.0, 0.3);
    Field u = random_smooth(rng, XG, 0.4);
    Distribution f = maxwellian(rho, u, 1.0, XG, VG);
    Distribution g = step_collision(f, 1.0, 0.05, 7.8e-4);
    double scale = 0.0;
    for (double v : f.values) scale = std::max(scale, v);
    for (std::size_t k = 0; k < f.values.size(); ++k)
        CHECK(std::abs(g.values[k] - f.values[k]) <= 1e-12 * scale);
}

TEST_CASE("collision: per-cell conservation") {
    Rng rng(19);
    for (double kappa : {0.0, 1.0}) {
        Distribution f = random_smooth_distribution(rng, XG, VG, kappa > 0 ? kappa : 0.4);
        Distribution g = step_collision(f, kappa, 0.05, 1e-3);
        MacroState a = moments(f), b = moments(g);
        for (int i = 0; i < XG.n_x; ++i) {
            CHECK(std::abs(b.rho[i] - a.rho[i]) <= 1e-14 * a.rho[i]);
            CHECK(std::abs(b.momentum[i] - a.momentum[i]) <=
                  1e-12 * (a.rho[i] + std::abs(a.momentum[i])));
        }
    }
}

TEST_CASE("collision: deep relaxation reaches the Maxwellian") {
    Rng rng(23);
    Distribution f = random_smooth_distribution(rng, XG, VG, 1.0);
    Distribution g = f;
    for (int k = 0; k < 5; ++k) g = step_collision(g, 1.0, 1e-3, 1.0);  // dt/tau = 1e3
    MacroState mac = moments(f);
    Distribution M = maxwellian(mac.rho, bulk_velocity(mac), 1.0, XG, VG);
    double l1 = 0.0;
    for (std::size_t k = 0; k < g.values.size(); ++k)
        l1 += std::abs(g.values[k] - M.values[k]);
    CHECK(l1 * g.cell_measure() < 1e-6);
}

TEST_CASE("collision: fault fixture breaks conservation") {
    Rng rng(27);
    Distribution f = random_smooth_distribution(rng, XG, VG, 1.0);
    CollisionOptions opts;
    opts.flux_imbalance = 0.05;
    Distribution g = step_collision(f, 1.0, 0.05, 1e-3, 0.0, opts);
    MacroState a = moments(f), b = moments(g);
    double worst = 0.0;
    for (int i = 0; i < XG.n_x; ++i)
        worst = std::max(worst, std::abs(b.rho[i] - a.rho[i]) / a.rho[i]);
    CHECK(worst > 1e-10);
}

TEST_CASE("dissipation: zero at equilibrium, positive off it, homogeneous") {
    Rng rng(29);
    Field rho = random_smooth_positive(rng, XG, 1.0, 0.3);
    Field u = random_smooth(rng, XG, 0.4);
    Distribution M = maxwellian(rho, u, 1.0, XG, VG);
    CHECK(dissipation(M, 1.0) <= 1e-10);

    // kappa mismatch: evaluate D at kappa' != kappa
    CHECK(dissipation(M, 0.7) > 1e-4);

    Distribution f = random_smooth_distribution(rng, XG, VG, 0.8);
    double d1 = dissipation(f, 0.8);
    CHECK(d1 > 0.0);
    Distribution f2 = f;
    for (double& v : f2.values) v *= 2.0;
    CHECK(dissipation(f2, 0.8) == doctest::Approx(2.0 * d1).epsilon(1e-10));
}

TEST_CASE("energy functional: global equilibrium value and positivity") {
    Distribution m = maxwellian(1.0, 0.0, 1.0, XG, VG);
    Potential pot = solve_pb(moments(m).rho, XG, 1e-12, 60);
    CHECK(std::abs(energy_functional(m, pot, 1.0)) < 1e-8);

    // potential part nonnegative and monotone in the perturbation amplitude
    double prev = 0.0;
    for (double amp : {0.05, 0.1, 0.2}) {
        Potential p;
        p.phi = Field(XG.n_x);
        for (int i = 0; i < XG.n_x; ++i)
            p.phi[i] = amp * std::cos(2.0 * M_PI * XG.center(i));
        p.e_field = electric_field(p.phi, XG);
        Distribution zero(XG, VG);
        double val = energy_functional(zero, p, 1.0);
        CHECK(val >= 0.0);
        CHECK(val > prev);
        prev = val;
    }
}

TEST_CASE("vpfp_step: global Maxwellian is steady over 100 steps") {
    SimConfig cfg;
    cfg.kappa = 1.0;
    cfg.tau = 0.05;
    Distribution f0 = maxwellian(1.0, 0.0, 1.0, XG, VG);
    KineticState st{f0, solve_pb(moments(f0).rho, XG, cfg.pb_tol), 0.0};
    DiagnosticsRecord diag;
    double dt = cfg.dt_cfl_factor * XG.dx() / VG.v_max;
    for (int k = 0; k < 100; ++k) st = vpfp_step(st, dt, cfg, diag);
    double err = 0.0;
    for (std::size_t k = 0; k < f0.values.size(); ++k)
        err = std::max(err, std::abs(st.f.values[k] - f0.values[k]));
    CHECK(err <= 1e-8);
    for (const auto& s : diag.samples) {
        CHECK(std::abs(s.mass - diag.samples.front().mass) <= 1e-10 * s.mass);
        CHECK(std::abs(s.energy) <= 1e-8);
    }
}

TEST_CASE("run_kinetic: KEI monitor, mass conservation, moment bound") {
    SimConfig cfg;
    cfg.kappa = 1.0;
    cfg.tau = 0.05;
    cfg.t_end = 0.1;
    Field rho0 = fourier_field({1.0, 0.2}, XG);
    Field u0 = fourier_field({0.0, 0.0, 0.1}, XG);
    Distribution f0 = maxwellian(rho0, u0, cfg.kappa, XG, VG);
    KineticRun run = run_kinetic(cfg, f0, 10);

    double mass0 = run.diagnostics.samples.front().mass;
    double e0 = run.diagnostics.samples.front().energy;
    double cprime = moment_bound_constant(VG, cfg.kappa);
    double kei_tol = cfg.energy_tol * std::abs(e0);
    double run_min = 1e300;
    for (const auto& s : run.diagnostics.samples) {
        CHECK(std::abs(s.mass - mass0) <= 1e-10 * mass0);
        double m = s.energy + s.cum_dissipation;
        if (run_min < 1e300) CHECK(m <= run_min + kei_tol);
        run_min = std::min(run_min, m);
        // uniform-in-time second moment bound with the oracle constant
        CHECK(s.second_moment <= 4.0 * (e0 + cprime * (1.0 + mass0)));
        // dissipation estimate: (1/tau) int D <= E0 + C'(1 + mass)
        CHECK(s.cum_dissipation <= e0 + cprime * (1.0 + mass0));
    }
    CHECK(run.diagnostics.samples.back().leak <= cfg.boundary_mass_tol * mass0);
}

TEST_CASE("run_kinetic: equilibrium data gives flat diagnostics") {
    SimConfig cfg;
    cfg.kappa = 1.0;
    cfg.tau = 0.05;
    cfg.t_end = 0.05;
    Distribution f0 = maxwellian(1.0, 0.0, 1.0, XG, VG);
    KineticRun run = run_kinetic(cfg, f0, 5);
    const auto& first = run.diagnostics.samples.front();
    for (const auto& s : run.diagnostics.samples) {
        CHECK(std::abs(s.mass - first.mass) <= 1e-12 * first.mass);
        CHECK(std::abs(s.second_moment - first.second_moment) <= 1e-8);
        CHECK(std::abs(s.energy - first.energy) <= 1e-8);
    }
}

TEST_CASE("run_kinetic: dt refinement self-convergence") {
    SimConfig cfg;
    cfg.kappa = 1.0;
    cfg.tau = 0.05;
    cfg.t_end = 0.05;
    Field rho0 = fourier_field({1.0, 0.2}, XG);
    Field u0 = fourier_field({0.0, 0.0, 0.1}, XG);
    Distribution f0 = maxwellian(rho0, u0, cfg.kappa, XG, VG);

    cfg.dt_cfl_factor = 0.4;
    KineticRun coarse = run_kinetic(cfg, f0, 5);
    cfg.dt_cfl_factor = 0.2;
    KineticRun mid = run_kinetic(cfg, f0, 5);
    cfg.dt_cfl_factor = 0.1;
    KineticRun fine = run_kinetic(cfg, f0, 5);

    auto l1_diff = [](const Distribution& a, const Distribution& b) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.values.size(); ++k)
            s += std::abs(a.values[k] - b.values[k]);
        return s * a.cell_measure();
    };
    double e_coarse = l1_diff(coarse.snapshots.back().f, fine.snapshots.back().f);
    double e_mid = l1_diff(mid.snapshots.back().f, fine.snapshots.back().f);
    CHECK(e_mid < 0.5 * e_coarse);
}

TEST_CASE("vpfp_step rejects CFL violation") {
    SimConfig cfg;
    Distribution f0 = maxwellian(1.0, 0.0, 1.0, XG, VG);
    KineticState st{f0, solve_pb(moments(f0).rho, XG, cfg.pb_tol), 0.0};
    DiagnosticsRecord diag;
    CHECK_THROWS_AS(vpfp_step(st, 1.0, cfg, diag), CflViolation);
}

TEST_CASE("positivity: clip-and-rebalance stays below budget") {
    SimConfig cfg;
    cfg.kappa = 1.0;
    cfg.tau = 0.05;
    cfg.t_end = 0.1;
    Field rho0 = fourier_field({1.0, 0.2}, XG);
    Field u0 = fourier_field({0.0, 0.0, 0.1}, XG);
    Distribution f0 = maxwellian(rho0, u0, cfg.kappa, XG, VG);
    KineticRun run = run_kinetic(cfg, f0, 5);
    CHECK(run.snapshots.back().f.min_value() >= -1e-14);
    CHECK(run.diagnostics.clipped_mass <= 1e-12 * run.diagnostics.samples.front().mass);
}

TEST_CASE("stabilizers: regularized drift and mollified field keep the run sane") {
    SimConfig cfg;
    cfg.kappa = 1.0;
    cfg.tau = 0.05;
    cfg.t_end = 0.05;
    cfg.stabilizer_epsilon = 0.05;
    Field rho0 = fourier_field({1.0, 0.2}, XG);
    Field u0 = fourier_field({0.0, 0.0, 0.1}, XG);
    Distribution f0 = maxwellian(rho0, u0, cfg.kappa, XG, VG);
    KineticRun run = run_kinetic(cfg, f0, 5);
    double mass0 = run.diagnostics.samples.front().mass;
    CHECK(std::abs(run.diagnostics.samples.back().mass - mass0) <= 1e-10 * mass0);
    CHECK(run.snapshots.back().f.min_value() >= -1e-14);
}
