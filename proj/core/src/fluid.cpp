#include "ivpfp/fluid.hpp"

#include <cmath>

#include "ivpfp/errors.hpp"
#include "ivpfp/spectral.hpp"

namespace ivpfp {

namespace {

inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

struct FluxPair {
    double frho, fm;
};

inline FluxPair physical_flux(double rho, double m, double kappa) {
    double u = m / rho;
    return {m, m * u + kappa * rho};
}

}  // namespace

FluidState fluid_step(const FluidState& state, double dt, double kappa,
                      const FluidOptions& opts) {
    const MacroState& U = state.macro;
    const SpatialGrid& g = U.grid;
    const int n = g.n_x;
    const double dx = g.dx();
    const double sqrt_k = std::sqrt(kappa);

    double u_max = 0.0;
    for (int i = 0; i < n; ++i) {
        if (U.rho[i] < opts.rho_floor)
            throw VacuumBreach("fluid_step: density below rho_floor");
        u_max = std::max(u_max, std::abs(U.momentum[i] / U.rho[i]));
    }
    if ((u_max + sqrt_k) * dt / dx > 0.9)
        throw CflViolation("fluid_step: CFL number above 0.9");

    // Minmod-limited reconstruction (optional); first order otherwise.
    Field srho(n, 0.0), sm(n, 0.0);
    if (opts.second_order) {
        for (int i = 0; i < n; ++i) {
            int im = g.wrap(i - 1), ip = g.wrap(i + 1);
            srho[i] = minmod(U.rho[ip] - U.rho[i], U.rho[i] - U.rho[im]);
            sm[i] = minmod(U.momentum[ip] - U.momentum[i], U.momentum[i] - U.momentum[im]);
        }
    }

    // Rusanov flux on face i+1/2 between cells i and i+1.
    Field frho(n), fm(n);
    for (int i = 0; i < n; ++i) {
        int ip = g.wrap(i + 1);
        double rl = U.rho[i] + 0.5 * srho[i];
        double ml = U.momentum[i] + 0.5 * sm[i];
        double rr = U.rho[ip] - 0.5 * srho[ip];
        double mr = U.momentum[ip] - 0.5 * sm[ip];
        if (rl < opts.rho_floor) rl = opts.rho_floor;
        if (rr < opts.rho_floor) rr = opts.rho_floor;
        FluxPair fl = physical_flux(rl, ml, kappa);
        FluxPair fr = physical_flux(rr, mr, kappa);
        double alpha = std::max(std::abs(ml / rl), std::abs(mr / rr)) + sqrt_k;
        frho[i] = 0.5 * (fl.frho + fr.frho) - 0.5 * alpha * (rr - rl);
        fm[i] = 0.5 * (fl.fm + fr.fm) - 0.5 * alpha * (mr - ml);
    }

    MacroState next(g);
    const double lam = dt / dx;
    for (int i = 0; i < n; ++i) {
        int im = g.wrap(i - 1);
        next.rho[i] = U.rho[i] - lam * (frho[i] - frho[im]);
        next.momentum[i] = U.momentum[i] - lam * (fm[i] - fm[im]);
        if (next.rho[i] < opts.rho_floor)
            throw VacuumBreach("fluid_step: density below rho_floor after flux update");
    }

    // Source (0, -rho d_x phi) at cell centers, phi refreshed from the
    // post-flux density so the returned state satisfies potential = solve_pb(rho).
    Potential pot = solve_pb(next.rho, g, opts.pb_tol);
    for (int i = 0; i < n; ++i) next.momentum[i] += dt * next.rho[i] * pot.e_field[i];

    return FluidState{std::move(next), std::move(pot), state.time + dt};
}

double fluid_total_energy(const FluidState& state, double kappa) {
    const SpatialGrid& g = state.macro.grid;
    double s = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        double rho = state.macro.rho[i];
        double m = state.macro.momentum[i];
        double phi = state.potential.phi[i];
        double e = state.potential.e_field[i];
        s += 0.5 * m * m / rho;
        if (kappa > 0.0) s += kappa * rho * std::log(rho);
        s += 0.5 * e * e + phi * std::exp(phi) - std::expm1(phi);
    }
    return s * g.dx();
}

ElectronField electron_velocity(const FluidState& state) {
    const SpatialGrid& g = state.macro.grid;
    Spectral1D& sp = spectral_for(g);

    Field phit = dphi_dt(state.macro, state.potential.phi);

    ElectronField out;
    out.rho_e.resize(g.n_x);
    Field drho_e(g.n_x);
    for (int i = 0; i < g.n_x; ++i) {
        out.rho_e[i] = std::exp(state.potential.phi[i]);
        drho_e[i] = out.rho_e[i] * phit[i];
    }

    // Divergence solve: -Lap psi = -d_t rho_e, v = -d_x psi, u_e = e^{-phi} v.
    Field neg(g.n_x);
    for (int i = 0; i < g.n_x; ++i) neg[i] = -drho_e[i];
    Field psi = sp.poisson_zero_mean(neg);
    Field v = sp.derivative(psi);
    for (double& x : v) x = -x;

    out.u_e.resize(g.n_x);
    for (int i = 0; i < g.n_x; ++i) out.u_e[i] = std::exp(-state.potential.phi[i]) * v[i];

    Field flux(g.n_x);
    for (int i = 0; i < g.n_x; ++i) flux[i] = out.rho_e[i] * out.u_e[i];
    Field div = sp.derivative(flux);
    double r = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        double val = drho_e[i] + div[i];
        r += val * val;
    }
    out.continuity_residual = std::sqrt(r * g.dx());
    return out;
}

FluidRun run_fluid(const SimConfig& cfg, const MacroState& U0, int n_snapshots,
                   const FluidOptions& opts, double dt_max) {
    cfg.validate();
    if (n_snapshots < 1) throw GridError("run_fluid: need at least one snapshot");
    const SpatialGrid& g = U0.grid;

    double u_max = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        if (U0.rho[i] < opts.rho_floor) throw VacuumBreach("run_fluid: initial density below floor");
        u_max = std::max(u_max, std::abs(U0.momentum[i] / U0.rho[i]));
    }
    // Margin on the initial wave speed; fluid_step re-checks every step.
    double dt_bound = cfg.dt_cfl_factor * g.dx() / (1.5 * (u_max + std::sqrt(cfg.kappa)) + 0.1);
    if (dt_max > 0.0) dt_bound = std::min(dt_bound, dt_max);
    double snap_dt = cfg.t_end / n_snapshots;
    int steps_per_snap = std::max(1, static_cast<int>(std::ceil(snap_dt / dt_bound - 1e-12)));
    double dt = snap_dt / steps_per_snap;

    FluidRun run;
    run.dt = dt;

    FluidOptions step_opts = opts;
    step_opts.pb_tol = cfg.pb_tol;

    FluidState state{U0, solve_pb(U0.rho, g, cfg.pb_tol), 0.0};
    auto log_state = [&](const FluidState& s) {
        double mn = s.macro.rho[0];
        for (double v : s.macro.rho) mn = std::min(mn, v);
        run.log.push_back({s.time, s.macro.mass(), fluid_total_energy(s, cfg.kappa), mn});
    };

    run.snapshots.push_back(state);
    run.electron.push_back(electron_velocity(state));
    log_state(state);
    for (int snap = 1; snap <= n_snapshots; ++snap) {
        for (int k = 0; k < steps_per_snap; ++k)
            state = fluid_step(state, dt, cfg.kappa, step_opts);
        run.snapshots.push_back(state);
        run.electron.push_back(electron_velocity(state));
        log_state(state);
    }
    return run;
}

}  // namespace ivpfp
