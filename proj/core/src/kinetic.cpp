#include "ivpfp/kinetic.hpp"

#include <cmath>
#include <cstring>
#include <vector>

#include "ivpfp/entropy.hpp"
#include "ivpfp/errors.hpp"
#include "ivpfp/macro.hpp"
#include "ivpfp/maxwellian.hpp"
#include "ivpfp/sl_shift.hpp"
#include "ivpfp/spectral.hpp"

namespace ivpfp {

namespace {

// g(w) = w / (e^w - 1), the Bernoulli factor of the Chang-Cooper face
// coefficients, in overflow-safe form. g(0) = 1, g(w) ~ w e^{-w} for large
// positive w, g(w) ~ -w for large negative w.
inline double bernoulli_factor(double w) {
    if (std::abs(w) < 1e-5) return 1.0 - 0.5 * w + w * w / 12.0;
    if (w > 36.0) return w * std::exp(-w);
    if (w < -36.0) return -w;
    return w / std::expm1(w);
}

// Face coefficients of the collision flux J_{j+1/2} = a_j f_{j+1} - b_j f_j.
// Both a and b are positive; their ratio e^{w} makes the analytic Maxwellian
// shape the exact discrete equilibrium.
struct FaceCoeffs {
    std::vector<double> a, b, w;
};

FaceCoeffs face_coeffs(const VelocityGrid& vg, double u, double kappa_eff) {
    const int nf = vg.n_v - 1;
    const double dv = vg.dv();
    FaceCoeffs c{std::vector<double>(nf), std::vector<double>(nf), std::vector<double>(nf)};
    for (int j = 0; j < nf; ++j) {
        double w = (u - vg.face(j)) * dv / kappa_eff;
        c.w[j] = w;
        c.a[j] = (kappa_eff / dv) * bernoulli_factor(w);
        c.b[j] = (kappa_eff / dv) * bernoulli_factor(-w);
    }
    return c;
}

// Thomas algorithm for the strictly diagonally dominant collision system.
void solve_tridiag(std::vector<double>& lower, std::vector<double>& diag,
                   std::vector<double>& upper, std::vector<double>& rhs) {
    const int n = static_cast<int>(diag.size());
    for (int j = 1; j < n; ++j) {
        if (diag[j - 1] == 0.0) throw TridiagonalFailure("collision system singular pivot");
        double m = lower[j] / diag[j - 1];
        diag[j] -= m * upper[j - 1];
        rhs[j] -= m * rhs[j - 1];
    }
    if (diag[n - 1] == 0.0) throw TridiagonalFailure("collision system singular pivot");
    rhs[n - 1] /= diag[n - 1];
    for (int j = n - 2; j >= 0; --j) rhs[j] = (rhs[j] - upper[j] * rhs[j + 1]) / diag[j];
}

double row_momentum(const double* f, const VelocityGrid& vg) {
    double m = 0.0;
    for (int j = 0; j < vg.n_v; ++j) m += vg.center(j) * f[j];
    return m * vg.dv();
}

}  // namespace

Distribution step_transport_x(const Distribution& f, double dt, double* clipped) {
    const int nx = f.xgrid.n_x, nv = f.vgrid.n_v;
    const double dx = f.xgrid.dx();
    Distribution out(f.xgrid, f.vgrid);
    std::vector<double> in_row(nx), out_row(nx);
    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i < nx; ++i) in_row[i] = f(i, j);
        shift_periodic_cubic(in_row.data(), out_row.data(), nx,
                             f.vgrid.center(j) * dt / dx);
        double c = clip_negative_rebalance(out_row.data(), nx);
        if (clipped) *clipped += c * f.cell_measure();
        for (int i = 0; i < nx; ++i) out(i, j) = out_row[i];
    }
    return out;
}

Distribution step_accel_v(const Distribution& f, const Field& e_field, double dt,
                          double* leak, double* clipped) {
    const int nx = f.xgrid.n_x, nv = f.vgrid.n_v;
    const double dv = f.vgrid.dv();
    Distribution out(f.xgrid, f.vgrid);
    std::vector<double> buf(nv);
    for (int i = 0; i < nx; ++i) {
        double lost = shift_zero_inflow_cubic(f.row(i), buf.data(), nv,
                                              e_field[i] * dt / dv);
        double c = clip_negative_rebalance(buf.data(), nv);
        if (clipped) *clipped += c * f.cell_measure();
        if (leak) *leak += lost * f.cell_measure();
        std::memcpy(out.row(i), buf.data(), sizeof(double) * nv);
    }
    return out;
}

Distribution step_collision(const Distribution& f, double kappa, double tau, double dt,
                            double stabilizer_epsilon, const CollisionOptions& opts) {
    const int nx = f.xgrid.n_x, nv = f.vgrid.n_v;
    const double dv = f.vgrid.dv();
    // kappa = 0 runs through the same tridiagonal path with a diffusion floor
    // far below measurement tolerances; the weights then reduce to upwinding
    // of the alignment drift.
    const double kappa_eff = std::max(kappa, 1e-12 * dv * dv);
    const double mu = dt / (tau * dv);

    MacroState mac = moments(f);
    Field u = stabilizer_epsilon > 0.0 ? regularized_bulk_velocity(mac, stabilizer_epsilon)
                                       : bulk_velocity(mac);

    Distribution out(f.xgrid, f.vgrid);
    std::vector<double> lower(nv), diag(nv), upper(nv), rhs(nv), buf(nv);

    for (int i = 0; i < nx; ++i) {
        const double* fi = f.row(i);
        if (mac.rho[i] <= vacuum_floor) {
            std::memcpy(out.row(i), fi, sizeof(double) * nv);
            continue;
        }
        FaceCoeffs c = face_coeffs(f.vgrid, u[i], kappa_eff);
        double bias = 1.0 + opts.flux_imbalance;

        for (int j = 0; j < nv; ++j) {
            lower[j] = j > 0 ? -mu * c.b[j - 1] : 0.0;
            upper[j] = j < nv - 1 ? -mu * c.a[j] * bias : 0.0;
            diag[j] = 1.0;
            if (j < nv - 1) diag[j] += mu * c.b[j];
            if (j > 0) diag[j] += mu * c.a[j - 1];
            rhs[j] = fi[j];
        }
        solve_tridiag(lower, diag, upper, rhs);

        // Momentum restoration: the flux form conserves mass exactly but the
        // first moment picks up a round-off-level drift; a tiny conservative
        // velocity shift puts it back. Linear interpolation keeps positivity.
        double m0 = row_momentum(fi, f.vgrid);
        double* oi = out.row(i);
        std::memcpy(oi, rhs.data(), sizeof(double) * nv);
        double rho_row = mac.rho[i];
        for (int pass = 0; pass < 3; ++pass) {
            double err = m0 - row_momentum(oi, f.vgrid);
            double shift_cells = err / (rho_row * dv);
            if (std::abs(shift_cells) < 1e-18) break;
            shift_zero_inflow_linear(oi, buf.data(), nv, shift_cells);
            std::memcpy(oi, buf.data(), sizeof(double) * nv);
        }
    }
    return out;
}

double energy_functional(const Distribution& f, const Potential& pot, double kappa) {
    double pot_part = 0.0;
    for (std::size_t i = 0; i < pot.phi.size(); ++i) {
        double phi = pot.phi[i];
        double e = pot.e_field[i];
        // e^phi (phi - 1) + 1 written as phi e^phi - expm1(phi): nonnegative,
        // quadratic near phi = 0, and free of the 1 - 1 cancellation.
        pot_part += 0.5 * e * e + phi * std::exp(phi) - std::expm1(phi);
    }
    return kinetic_entropy(f, kappa) + pot_part * f.xgrid.dx();
}

double dissipation_with_drift(const Distribution& f, const Field& u, double kappa) {
    const int nx = f.xgrid.n_x, nv = f.vgrid.n_v;
    const double dv = f.vgrid.dv();
    const double dx = f.xgrid.dx();
    double total = 0.0;

    if (kappa > 0.0) {
        // Pairing form sum_faces J * kappa d(log(f/M))/dv * dv: consistent with
        // |kappa d_v f - (u-v) f|^2 / f, exactly zero at the discrete
        // Maxwellian, and nonnegative face by face.
        for (int i = 0; i < nx; ++i) {
            const double* fi = f.row(i);
            FaceCoeffs c = face_coeffs(f.vgrid, u[i], kappa);
            double s = 0.0;
            for (int j = 0; j < nv - 1; ++j) {
                if (fi[j] < dissipation_floor || fi[j + 1] < dissipation_floor) continue;
                double flux = c.a[j] * fi[j + 1] - c.b[j] * fi[j];
                double dlog = std::log(fi[j + 1] / fi[j]) - c.w[j];
                s += flux * kappa * dlog;
            }
            total += s;
        }
        return total * dx;
    }

    // kappa = 0: D = (u - v)^2 f with the upwind face value, i.e. J^2 / f_face
    // for the pure-drift flux J = -(u - v_face) f_face.
    for (int i = 0; i < nx; ++i) {
        const double* fi = f.row(i);
        double s = 0.0;
        for (int j = 0; j < nv - 1; ++j) {
            double drift = u[i] - f.vgrid.face(j);
            double face = drift > 0.0 ? fi[j] : (drift < 0.0 ? fi[j + 1] : 0.5 * (fi[j] + fi[j + 1]));
            if (face < dissipation_floor) continue;
            s += drift * drift * face;
        }
        total += s * dv;
    }
    return total * dx;
}

double dissipation(const Distribution& f, double kappa) {
    return dissipation_with_drift(f, bulk_velocity(moments(f)), kappa);
}

KineticState vpfp_step(const KineticState& state, double dt, const SimConfig& cfg,
                       DiagnosticsRecord& diag) {
    const Distribution& f = state.f;
    const double dx = f.xgrid.dx(), dv = f.vgrid.dv();

    double e_max = linf_norm(state.potential.e_field);
    double dt_bound = cfg.dt_cfl_factor * dx / f.vgrid.v_max;
    if (e_max > 0.0) dt_bound = std::min(dt_bound, cfg.dt_cfl_factor * dv / e_max);
    if (dt > dt_bound * (1.0 + 1e-9))
        throw CflViolation("vpfp_step: dt exceeds the CFL precondition");

    double leak = diag.samples.empty() ? 0.0 : diag.samples.back().leak;
    double cum_diss = diag.samples.empty() ? 0.0 : diag.samples.back().cum_dissipation;
    double ref_mass = diag.samples.empty() ? f.mass() : diag.samples.front().mass;

    // Strang sequence. rho is invariant under the v-direction substeps, so the
    // potential solved after the first half transport stays consistent for
    // both acceleration halves.
    Distribution f1 = step_transport_x(f, 0.5 * dt, &diag.clipped_mass);
    Potential pot = solve_pb(moments(f1).rho, f.xgrid, cfg.pb_tol);
    Field e = pot.e_field;
    if (cfg.stabilizer_epsilon > 0.0)
        e = spectral_for(f.xgrid).mollify(e, cfg.stabilizer_epsilon);

    Distribution f2 = step_accel_v(f1, e, 0.5 * dt, &leak, &diag.clipped_mass);
    Distribution f3 = step_collision(f2, cfg.kappa, cfg.tau, dt, cfg.stabilizer_epsilon);
    double diss = dissipation(f3, cfg.kappa);
    Distribution f4 = step_accel_v(f3, e, 0.5 * dt, &leak, &diag.clipped_mass);
    Distribution f5 = step_transport_x(f4, 0.5 * dt, &diag.clipped_mass);

    Potential pot5 = solve_pb(moments(f5).rho, f.xgrid, cfg.pb_tol);
    KineticState next{std::move(f5), std::move(pot5), state.time + dt};

    DiagnosticsSample s;
    s.time = next.time;
    s.mass = next.f.mass();
    MacroState mac = moments(next.f);
    s.momentum = integrate(mac.momentum, f.xgrid);
    double m2 = 0.0;
    for (int i = 0; i < f.xgrid.n_x; ++i)
        for (int j = 0; j < f.vgrid.n_v; ++j) {
            double v = f.vgrid.center(j);
            m2 += v * v * next.f(i, j);
        }
    s.second_moment = m2 * next.f.cell_measure();
    s.energy = energy_functional(next.f, next.potential, cfg.kappa);
    s.cum_dissipation = cum_diss + dt * diss / cfg.tau;
    s.leak = leak;
    diag.samples.push_back(s);

    if (std::abs(leak) > cfg.boundary_mass_tol * ref_mass)
        throw AbortOnLeak("vpfp_step: boundary mass leak exceeds tolerance");
    return next;
}

KineticRun run_kinetic(const SimConfig& cfg, const Distribution& f0, int n_snapshots) {
    cfg.validate();
    if (n_snapshots < 1) throw GridError("run_kinetic: need at least one snapshot");

    KineticState state{f0, solve_pb(moments(f0).rho, f0.xgrid, cfg.pb_tol), 0.0};

    double e_max = linf_norm(state.potential.e_field);
    double dt_bound = cfg.dt_cfl_factor * f0.xgrid.dx() / f0.vgrid.v_max;
    if (e_max > 0.0)
        dt_bound = std::min(dt_bound, cfg.dt_cfl_factor * f0.vgrid.dv() / e_max);
    double snap_dt = cfg.t_end / n_snapshots;
    int steps_per_snap = std::max(1, static_cast<int>(std::ceil(snap_dt / dt_bound - 1e-12)));
    double dt = snap_dt / steps_per_snap;

    KineticRun run;
    run.dt = dt;

    DiagnosticsSample s0;
    s0.time = 0.0;
    s0.mass = f0.mass();
    MacroState mac0 = moments(f0);
    s0.momentum = integrate(mac0.momentum, f0.xgrid);
    double m2 = 0.0;
    for (int i = 0; i < f0.xgrid.n_x; ++i)
        for (int j = 0; j < f0.vgrid.n_v; ++j) {
            double v = f0.vgrid.center(j);
            m2 += v * v * f0(i, j);
        }
    s0.second_moment = m2 * f0.cell_measure();
    s0.energy = energy_functional(f0, state.potential, cfg.kappa);
    run.diagnostics.samples.push_back(s0);

    run.snapshots.push_back(state);
    run.snapshot_times.push_back(0.0);
    for (int snap = 1; snap <= n_snapshots; ++snap) {
        for (int k = 0; k < steps_per_snap; ++k)
            state = vpfp_step(state, dt, cfg, run.diagnostics);
        run.snapshots.push_back(state);
        run.snapshot_times.push_back(snap * snap_dt);
    }
    return run;
}

}  // namespace ivpfp
