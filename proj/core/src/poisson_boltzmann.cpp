#include "ivpfp/poisson_boltzmann.hpp"

#include <algorithm>
#include <cmath>

#include "ivpfp/errors.hpp"
#include "ivpfp/spectral.hpp"

namespace ivpfp {

namespace {

Field pb_residual(Spectral1D& sp, const Field& phi, const Field& rho) {
    Field r = sp.laplacian(phi);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = -r[i] - rho[i] + std::exp(phi[i]);
    return r;
}

double lr_norm(const Field& f, const SpatialGrid& g, int r) {
    double s = 0.0;
    for (double v : f) s += r == 1 ? std::abs(v) : v * v;
    s *= g.dx();
    return r == 1 ? s : std::sqrt(s);
}

}  // namespace

Field solve_linearized(const Field& phi, const Field& rhs, const SpatialGrid& g,
                       double tol, int max_iter) {
    Spectral1D& sp = spectral_for(g);
    const int n = g.n_x;

    Field coeff(n);
    double vmin = std::exp(phi[0]), vmax = vmin;
    for (int i = 0; i < n; ++i) {
        coeff[i] = std::exp(phi[i]);
        vmin = std::min(vmin, coeff[i]);
        vmax = std::max(vmax, coeff[i]);
    }
    // Shifted fixed point psi <- (-Lap + m)^{-1} (rhs - (V - m) psi): the
    // iteration contracts with factor (vmax - vmin)/(vmax + vmin) < 1.
    const double shift = 0.5 * (vmin + vmax);
    const double tol_eff = tol * std::max(1.0, l2_norm(rhs, g));

    Field psi(n, 0.0);
    Field work(n), lap(n);
    double rn = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        for (int i = 0; i < n; ++i) work[i] = rhs[i] - (coeff[i] - shift) * psi[i];
        sp.inv_helmholtz_with_lap(work, shift, psi, lap);

        rn = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = -lap[i] + coeff[i] * psi[i] - rhs[i];
            rn += r * r;
        }
        rn = std::sqrt(rn * g.dx());
        if (rn <= tol_eff) return psi;
    }
    throw NonConvergence("solve_linearized: fixed point did not reach tolerance", rn);
}

Potential solve_pb(const Field& rho, const SpatialGrid& g, double tol, int max_iter,
                   std::vector<double>* residual_history) {
    const int n = g.n_x;
    if (static_cast<int>(rho.size()) != n) throw GridError("solve_pb: size mismatch");

    double rho_mean = mean(rho, g);
    if (!(rho_mean > 0)) throw ZeroMass("solve_pb: density has zero mass");

    Spectral1D& sp = spectral_for(g);

    Field phi(n, std::log(rho_mean));
    Field res = pb_residual(sp, phi, rho);
    double rn = l2_norm(res, g);
    if (residual_history) residual_history->push_back(rn);

    int it = 0;
    while (rn > tol) {
        if (++it > max_iter)
            throw NonConvergence("solve_pb: Newton did not reach tolerance", rn);

        Field neg_res(n);
        for (int i = 0; i < n; ++i) neg_res[i] = -res[i];
        double inner_tol = std::max(1e-13, std::min(1e-12, 0.01 * tol));
        Field delta = solve_linearized(phi, neg_res, g, inner_tol);

        // Line-search damping: halve the step until the residual decreases.
        double alpha = 1.0;
        for (;;) {
            Field trial(n);
            for (int i = 0; i < n; ++i) trial[i] = phi[i] + alpha * delta[i];
            Field tres = pb_residual(sp, trial, rho);
            double tn = l2_norm(tres, g);
            if (tn < rn) {
                phi = std::move(trial);
                res = std::move(tres);
                rn = tn;
                break;
            }
            alpha *= 0.5;
            if (alpha < 1e-8)
                throw NonConvergence("solve_pb: damping stalled", rn);
        }
        if (residual_history) residual_history->push_back(rn);
    }

    Potential out;
    out.phi = phi;
    out.e_field = sp.derivative(phi);
    for (double& e : out.e_field) e = -e;
    out.residual_norm = rn;

    // Structural identities of the accepted solve: neutrality (exact equality
    // at r = 1) and the e^phi contraction for r in {1, 2}.
    Field ephi(n);
    for (int i = 0; i < n; ++i) ephi[i] = std::exp(phi[i]);
    double slack = 10.0 * tol;
    if (std::abs(integrate(ephi, g) - integrate(rho, g)) > slack)
        throw SimError("solve_pb: neutrality violated beyond 10*tol");
    for (int r = 1; r <= 2; ++r)
        if (lr_norm(ephi, g, r) > lr_norm(rho, g, r) + slack)
            throw SimError("solve_pb: L" + std::to_string(r) + " contraction violated");
    return out;
}

Field electric_field(const Field& phi, const SpatialGrid& g) {
    Field e = spectral_for(g).derivative(phi);
    for (double& v : e) v = -v;
    return e;
}

Field dphi_dt(const MacroState& macro, const Field& phi) {
    Spectral1D& sp = spectral_for(macro.grid);
    Field div = sp.derivative(macro.momentum);
    for (double& v : div) v = -v;
    return solve_linearized(phi, div, macro.grid);
}

StabilityPair stability_check(const Field& rho1, const Field& rho2, const SpatialGrid& g,
                              double tol) {
    Potential p1 = solve_pb(rho1, g, tol);
    Potential p2 = solve_pb(rho2, g, tol);
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
        double de = p1.e_field[i] - p2.e_field[i];
        double dr = rho1[i] - rho2[i];
        lhs += de * de;
        rhs += dr * dr;
    }
    return {lhs * g.dx(), rhs * g.dx()};
}

}  // namespace ivpfp
