#include "ivpfp/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ivpfp/entropy.hpp"
#include "ivpfp/errors.hpp"
#include "ivpfp/spectral.hpp"

namespace ivpfp {

namespace {

constexpr double mass_match_tol = 1e-10;

double phase_mass(const Distribution& f) { return f.mass(); }

}  // namespace

AugmentedState augment(const KineticState& s) {
    MacroState mac = moments(s.f);
    AugmentedState out{s.f.xgrid, mac.rho, mac.momentum, s.potential.e_field,
                       Field(s.f.xgrid.n_x)};
    for (int i = 0; i < s.f.xgrid.n_x; ++i) out.rho_e[i] = std::exp(s.potential.phi[i]);
    return out;
}

AugmentedState augment(const FluidState& s) {
    AugmentedState out{s.macro.grid, s.macro.rho, s.macro.momentum, s.potential.e_field,
                       Field(s.macro.grid.n_x)};
    for (int i = 0; i < s.macro.grid.n_x; ++i) out.rho_e[i] = std::exp(s.potential.phi[i]);
    return out;
}

double relative_pressure(const Field& p, const Field& q, const SpatialGrid& g) {
    if (p.size() != q.size() || static_cast<int>(p.size()) != g.n_x)
        throw GridError("relative_pressure: size mismatch");
    double s = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        if (!(q[i] > 0.0)) throw NonpositiveReference("relative_pressure: q must be positive");
        if (p[i] > 0.0)
            s += p[i] * std::log(p[i] / q[i]) - p[i] + q[i];
        else
            s += q[i];
    }
    return s * g.dx();
}

ModulatedEnergyReport modulated_energy(const AugmentedState& trial,
                                       const AugmentedState& reference, double kappa,
                                       double time) {
    const SpatialGrid& g = trial.grid;
    if (!(g == reference.grid)) throw GridError("modulated_energy: grids differ");

    ModulatedEnergyReport rep;
    rep.time = time;

    double kin = 0.0, field = 0.0, electron = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        double rt = trial.rho[i];
        if (!(reference.rho[i] > 0.0))
            throw NonpositiveReference("modulated_energy: reference density must be positive");
        double ut = rt > vacuum_floor ? trial.momentum[i] / rt : 0.0;
        double ur = reference.momentum[i] / reference.rho[i];
        kin += 0.5 * rt * (ut - ur) * (ut - ur);

        double de = trial.e_field[i] - reference.e_field[i];
        field += 0.5 * de * de;

        // e^{phi^t}(phi^t - phi) - (e^{phi^t} - e^phi) with phi = log rho_e;
        // algebraically the relative pressure of the electron densities.
        double pt = std::log(trial.rho_e[i]);
        double pr = std::log(reference.rho_e[i]);
        electron += trial.rho_e[i] * (pt - pr) - (trial.rho_e[i] - reference.rho_e[i]);
    }
    rep.kinetic_term = kin * g.dx();
    rep.field_term = field * g.dx();
    rep.electron_term = electron * g.dx();
    rep.pressure_term = kappa > 0.0 ? kappa * relative_pressure(trial.rho, reference.rho, g) : 0.0;
    rep.total = rep.kinetic_term + rep.pressure_term + rep.field_term + rep.electron_term;
    return rep;
}

BoundPair l1_density_bound(const Field& rho1, const Field& rho2, const SpatialGrid& g) {
    double lhs = 0.0, total = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        lhs += std::abs(rho1[i] - rho2[i]);
        total += rho1[i] + rho2[i];
    }
    lhs *= g.dx();
    total *= g.dx();
    double p = relative_pressure(rho1, rho2, g);
    return {lhs, std::sqrt(2.0 * total * p)};
}

MomentumBounds momentum_error_bounds(const MacroState& trial, const MacroState& ref,
                                     double u_ref_sup) {
    const SpatialGrid& g = trial.grid;
    Field ut = bulk_velocity(trial);
    Field ur = bulk_velocity(ref);
    double mass_t = 0.0, drift2 = 0.0, dm = 0.0, dstress = 0.0, drho = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        mass_t += trial.rho[i];
        drift2 += trial.rho[i] * (ut[i] - ur[i]) * (ut[i] - ur[i]);
        dm += std::abs(trial.momentum[i] - ref.momentum[i]);
        dstress += std::abs(trial.momentum[i] * ut[i] - ref.momentum[i] * ur[i]);
        drho += std::abs(trial.rho[i] - ref.rho[i]);
    }
    double dx = g.dx();
    mass_t *= dx;
    drift2 *= dx;
    dm *= dx;
    dstress *= dx;
    drho *= dx;

    MomentumBounds out;
    out.momentum = {dm, std::sqrt(mass_t) * std::sqrt(drift2) + u_ref_sup * drho};
    out.stress = {dstress, drift2 + 2.0 * std::sqrt(mass_t) * std::sqrt(drift2) * u_ref_sup +
                               drho * u_ref_sup * u_ref_sup};
    return out;
}

double kl_to_maxwellian(const Distribution& f, const Field& rho, const Field& u,
                        double kappa) {
    if (!(kappa > 0.0)) throw GridError("kl_to_maxwellian: kappa must be positive");
    const double log_norm = -0.5 * std::log(2.0 * M_PI * kappa);
    double s = 0.0;
    for (int i = 0; i < f.xgrid.n_x; ++i) {
        if (!(rho[i] > 0.0))
            throw NonpositiveReference("kl_to_maxwellian: rho must be positive");
        const double* fi = f.row(i);
        double lr = std::log(rho[i]) + log_norm;
        for (int j = 0; j < f.vgrid.n_v; ++j) {
            if (fi[j] <= 0.0) continue;
            double w = f.vgrid.center(j) - u[i];
            double log_m = lr - w * w / (2.0 * kappa);
            s += fi[j] * (std::log(fi[j]) - log_m);
        }
    }
    return s * f.cell_measure();
}

BoundPair log_sobolev_check(const Distribution& f, const Field& u, double kappa) {
    MacroState mac = moments(f);
    double lhs = kappa * kl_to_maxwellian(f, mac.rho, u, kappa);

    // The LSI saturates exactly on shifted Maxwellians, so the rhs is
    // evaluated with a spectral v-derivative (near-exact for smooth decaying
    // rows; the Gaussian tails make the row effectively periodic). Cells with
    // f below a relative floor are skipped: the derivative noise there would
    // otherwise be divided by a vanishing f.
    const int nv = f.vgrid.n_v;
    SpatialGrid vrow(nv, 2.0 * f.vgrid.v_max);
    Spectral1D& sp = spectral_for(vrow);
    double fmax = 0.0;
    for (double v : f.values) fmax = std::max(fmax, v);
    const double floor = std::max(1e-13 * fmax, dissipation_floor);

    double rhs = 0.0;
    Field row(nv);
    for (int i = 0; i < f.xgrid.n_x; ++i) {
        const double* fi = f.row(i);
        for (int j = 0; j < nv; ++j) row[j] = fi[j];
        Field df = sp.derivative(row);
        double s = 0.0;
        for (int j = 0; j < nv; ++j) {
            if (fi[j] < floor) continue;
            double flux = kappa * df[j] - (u[i] - f.vgrid.center(j)) * fi[j];
            s += flux * flux / fi[j];
        }
        rhs += s;
    }
    rhs *= 0.5 * f.cell_measure();
    return {lhs, rhs};
}

BoundPair csiszar_kullback_check(const Distribution& f, const Distribution& g) {
    double mf = phase_mass(f), mg = phase_mass(g);
    if (std::abs(mf - mg) > mass_match_tol * std::max(1.0, std::max(mf, mg)))
        throw MassMismatch("csiszar_kullback_check: masses differ");
    double l1 = 0.0, kl = 0.0;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        l1 += std::abs(f.values[k] - g.values[k]);
        if (f.values[k] > 0.0)
            kl += f.values[k] *
                  std::log(f.values[k] / std::max(g.values[k], entropy_log_clamp));
    }
    double measure = f.cell_measure();
    l1 *= measure;
    kl *= measure;
    return {l1 * l1, 2.0 * mf * kl};
}

double w1_distance_1d(const Field& mu, const Field& nu, const SpatialGrid& g) {
    double mm = integrate(mu, g), mn = integrate(nu, g);
    if (std::abs(mm - mn) > mass_match_tol * std::max(1.0, std::max(std::abs(mm), std::abs(mn))))
        throw MassMismatch("w1_distance_1d: masses differ");
    // Cyclic optimal transport: min over the offset c of int |G - c| with G
    // the CDF difference; the minimizer is the median of the face values.
    const int n = g.n_x;
    Field cdf(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += (mu[i] - nu[i]) * g.dx();
        cdf[i] = acc;
    }
    Field sorted = cdf;
    std::nth_element(sorted.begin(), sorted.begin() + (n - 1) / 2, sorted.end());
    double med = sorted[(n - 1) / 2];
    double w = 0.0;
    for (int i = 0; i < n; ++i) w += std::abs(cdf[i] - med);
    return w * g.dx();
}

PhaseSpaceBlBound dbl_phase_space(const Distribution& f, const Field& rho, const Field& u) {
    const SpatialGrid& g = f.xgrid;
    double mf = phase_mass(f);
    double mrho = integrate(rho, g);
    if (std::abs(mf - mrho) > mass_match_tol * std::max(1.0, std::max(mf, mrho)))
        throw MassMismatch("dbl_phase_space: masses differ");

    MacroState mac = moments(f);
    Field ut = bulk_velocity(mac);

    double spread2 = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        const double* fi = f.row(i);
        for (int j = 0; j < f.vgrid.n_v; ++j) {
            double w = f.vgrid.center(j) - ut[i];
            spread2 += w * w * fi[j];
        }
    }
    spread2 *= f.cell_measure();

    double drift2 = 0.0;
    for (int i = 0; i < g.n_x; ++i)
        drift2 += mac.rho[i] * (ut[i] - u[i]) * (ut[i] - u[i]);
    drift2 *= g.dx();

    PhaseSpaceBlBound out;
    out.spread_term = std::sqrt(std::max(0.0, spread2));
    out.drift_term = std::sqrt(std::max(0.0, drift2));
    out.w1_term = w1_distance_1d(mac.rho, rho, g);
    Field du = spectral_for(g).derivative(u);
    out.lipschitz_const = 1.0 + linf_norm(u) + linf_norm(du);
    out.total = std::sqrt(mf) * (out.spread_term + out.drift_term) +
                out.lipschitz_const * out.w1_term;
    return out;
}

CriticalTermCheck critical_term_check(const Field& rho_e_trial, const Field& rho_e_ref,
                                      const Field& u_bar, const Field& phi_trial,
                                      const Field& phi_ref, const SpatialGrid& g) {
    Field dphi(g.n_x);
    for (int i = 0; i < g.n_x; ++i) dphi[i] = phi_trial[i] - phi_ref[i];
    Field grad = spectral_for(g).derivative(dphi);

    CriticalTermCheck out;
    double lhs = 0.0, rgrad = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        lhs += (rho_e_trial[i] - rho_e_ref[i]) * u_bar[i] * grad[i];
        rgrad += grad[i] * grad[i];
    }
    out.lhs = std::abs(lhs * g.dx());
    out.rhs_grad = rgrad * g.dx();
    out.rhs_pressure = relative_pressure(rho_e_trial, rho_e_ref, g);
    return out;
}

}  // namespace ivpfp
