#include <doctest.h>

#include <cmath>

#include "ivpfp/errors.hpp"
#include "ivpfp/maxwellian.hpp"
#include "ivpfp/metrics.hpp"
#include "ivpfp/random_fields.hpp"

using namespace ivpfp;

namespace {

const SpatialGrid XG(64, 1.0);
const VelocityGrid VG(128, 8.0);

AugmentedState make_aug(const Field& rho, const Field& u, const SpatialGrid& g,
                        double pb_tol = 1e-12) {
    Potential p = solve_pb(rho, g, pb_tol, 60);
    AugmentedState a{g, rho, Field(g.n_x), p.e_field, Field(g.n_x)};
    for (int i = 0; i < g.n_x; ++i) {
        a.momentum[i] = rho[i] * u[i];
        a.rho_e[i] = std::exp(p.phi[i]);
    }
    return a;
}

}  // namespace

TEST_CASE("relative pressure: identity, closed form, Taylor lower bound") {
    Field two(XG.n_x, 2.0), one(XG.n_x, 1.0);
    CHECK(relative_pressure(one, one, XG) == 0.0);
    CHECK(relative_pressure(two, one, XG) ==
          doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-12));
    CHECK_THROWS_AS(relative_pressure(one, Field(XG.n_x, 0.0), XG), NonpositiveReference);

    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
        Field p = random_smooth_positive(rng, XG, rng.uniform(0.5, 1.5), 0.4);
        Field q = random_smooth_positive(rng, XG, rng.uniform(0.5, 1.5), 0.4);
        // pointwise P(p|q) >= min(1/p, 1/q)(p-q)^2 / 2
        double lower = 0.0;
        for (int i = 0; i < XG.n_x; ++i)
            lower += 0.5 * std::min(1.0 / p[i], 1.0 / q[i]) * (p[i] - q[i]) * (p[i] - q[i]);
        lower *= XG.dx();
        CHECK(relative_pressure(p, q, XG) >= lower - 1e-12);
    }
}

TEST_CASE("modulated energy: zero at self, reductions, independent integrand") {
    Rng rng(5);
    Field rho = random_smooth_positive(rng, XG, 1.0, 0.3);
    Field u = random_smooth(rng, XG, 0.3);
    AugmentedState ref = make_aug(rho, u, XG);

    ModulatedEnergyReport self = modulated_energy(ref, ref, 1.0);
    CHECK(self.kinetic_term == 0.0);
    CHECK(self.pressure_term == 0.0);
    CHECK(self.field_term == 0.0);
    CHECK(self.electron_term == 0.0);
    CHECK(self.total == 0.0);

    // kappa = 0 drops the pressure term by definition
    Field rho_t(XG.n_x), u_t(XG.n_x);
    for (int i = 0; i < XG.n_x; ++i) {
        rho_t[i] = rho[i] * (1.0 + 0.01 * std::cos(2.0 * M_PI * XG.center(i)));
        u_t[i] = u[i] + 0.01 * std::sin(2.0 * M_PI * XG.center(i));
    }
    AugmentedState trial = make_aug(rho_t, u_t, XG);
    ModulatedEnergyReport rep0 = modulated_energy(trial, ref, 0.0);
    CHECK(rep0.pressure_term == 0.0);

    // independent direct evaluation of the full integrand
    ModulatedEnergyReport rep = modulated_energy(trial, ref, 1.0);
    double direct = 0.0;
    for (int i = 0; i < XG.n_x; ++i) {
        double ut = trial.momentum[i] / trial.rho[i];
        double ur = ref.momentum[i] / ref.rho[i];
        direct += 0.5 * trial.rho[i] * (ut - ur) * (ut - ur);
        direct += trial.rho[i] * std::log(trial.rho[i] / ref.rho[i]) - trial.rho[i] + ref.rho[i];
        double de = trial.e_field[i] - ref.e_field[i];
        direct += 0.5 * de * de;
        direct += trial.rho_e[i] * std::log(trial.rho_e[i] / ref.rho_e[i]) -
                  (trial.rho_e[i] - ref.rho_e[i]);
    }
    direct *= XG.dx();
    CHECK(rep.total == doctest::Approx(direct).epsilon(1e-12));
    CHECK(rep.total == doctest::Approx(rep.kinetic_term + rep.pressure_term +
                                       rep.field_term + rep.electron_term)
                           .epsilon(1e-15));

    // electron term is the relative pressure of the electron densities
    CHECK(rep.electron_term ==
          doctest::Approx(relative_pressure(trial.rho_e, ref.rho_e, XG)).epsilon(1e-12));
    for (double v : {rep.kinetic_term, rep.pressure_term, rep.field_term, rep.electron_term})
        CHECK(v >= 0.0);
}

TEST_CASE("l1 density bound: trivial, closed form, randomized") {
    Field one(XG.n_x, 1.0), two(XG.n_x, 2.0);
    BoundPair same = l1_density_bound(one, one, XG);
    CHECK(same.lhs == 0.0);
    CHECK(same.rhs == 0.0);

    BoundPair p = l1_density_bound(two, one, XG);
    CHECK(p.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.rhs ==
          doctest::Approx(std::sqrt(2.0 * 3.0 * (2.0 * std::log(2.0) - 1.0))).epsilon(1e-12));

    Rng rng(7);
    for (int k = 0; k < 100; ++k) {
        Field a = random_smooth_positive(rng, XG, rng.uniform(0.4, 1.6), 0.35);
        Field b = random_smooth_positive(rng, XG, rng.uniform(0.4, 1.6), 0.35);
        BoundPair q = l1_density_bound(a, b, XG);
        CHECK(q.lhs <= q.rhs + 1e-12);
    }
}

TEST_CASE("momentum error bounds") {
    Rng rng(9);
    MacroState ref(XG);
    Field rr = random_smooth_positive(rng, XG, 1.0, 0.3);
    Field ur = random_smooth(rng, XG, 0.4);
    for (int i = 0; i < XG.n_x; ++i) {
        ref.rho[i] = rr[i];
        ref.momentum[i] = rr[i] * ur[i];
    }
    MomentumBounds self = momentum_error_bounds(ref, ref, linf_norm(ur));
    CHECK(self.momentum.lhs == 0.0);
    CHECK(self.stress.lhs == 0.0);

    for (int k = 0; k < 100; ++k) {
        MacroState trial(XG);
        Field rt = random_smooth_positive(rng, XG, rng.uniform(0.6, 1.4), 0.3);
        Field ut = random_smooth(rng, XG, 0.5);
        for (int i = 0; i < XG.n_x; ++i) {
            trial.rho[i] = rt[i];
            trial.momentum[i] = rt[i] * ut[i];
        }
        MomentumBounds b = momentum_error_bounds(trial, ref, linf_norm(ur));
        CHECK(b.momentum.lhs <= b.momentum.rhs + 1e-12);
        CHECK(b.stress.lhs <= b.stress.rhs + 1e-12);
    }

    // u = 0 reference: the stress bound reduces to int rho^t |u^t|^2
    MacroState rest(XG);
    for (int i = 0; i < XG.n_x; ++i) rest.rho[i] = rr[i];
    MacroState trial(XG);
    Field ut = random_smooth(rng, XG, 0.5);
    for (int i = 0; i < XG.n_x; ++i) {
        trial.rho[i] = rr[i];
        trial.momentum[i] = rr[i] * ut[i];
    }
    MomentumBounds b0 = momentum_error_bounds(trial, rest, 0.0);
    double expect = 0.0;
    for (int i = 0; i < XG.n_x; ++i) expect += rr[i] * ut[i] * ut[i];
    expect *= XG.dx();
    CHECK(b0.stress.rhs == doctest::Approx(expect).epsilon(1e-12));
    CHECK(b0.stress.lhs <= b0.stress.rhs + 1e-12);
}

TEST_CASE("kl to maxwellian: zero at self, Gaussian closed form, decomposition") {
    Field one(XG.n_x, 1.0), zero(XG.n_x, 0.0);
    Distribution m = maxwellian(one, zero, 1.0, XG, VG);
    CHECK(std::abs(kl_to_maxwellian(m, one, zero, 1.0)) < 1e-12);

    // f = M(1, 0.3), reference (1, 0): KL = rho |u' - u|^2 / (2 kappa) = 0.045
    Field u3(XG.n_x, 0.3);
    Distribution m3 = maxwellian(one, u3, 1.0, XG, VG);
    CHECK(kl_to_maxwellian(m3, one, zero, 1.0) == doctest::Approx(0.045).epsilon(1e-9));

    Rng rng(11);
    for (int k = 0; k < 50; ++k) {
        double kap = rng.uniform(0.5, 1.2);
        Distribution f = random_smooth_distribution(rng, XG, VG, kap);
        Field rho = random_smooth_positive(rng, XG, 1.0, 0.4);
        Field u = random_smooth(rng, XG, 0.4);
        MacroState mac = moments(f);
        Field ut = bulk_velocity(mac);
        double lhs = kl_to_maxwellian(f, rho, u, kap);
        double self_kl = kl_to_maxwellian(f, mac.rho, ut, kap);
        double log_term = 0.0, drift = 0.0;
        for (int i = 0; i < XG.n_x; ++i) {
            log_term += mac.rho[i] * std::log(mac.rho[i] / rho[i]);
            drift += mac.rho[i] * (ut[i] - u[i]) * (ut[i] - u[i]);
        }
        log_term *= XG.dx();
        drift *= XG.dx() / (2.0 * kap);
        CHECK(std::abs(lhs - (self_kl + log_term + drift)) <= 1e-10);
    }
}

TEST_CASE("log-Sobolev check") {
    Field one(XG.n_x, 1.0), zero(XG.n_x, 0.0);
    Distribution m = maxwellian(one, zero, 1.0, XG, VG);
    BoundPair self = log_sobolev_check(m, zero, 1.0);
    CHECK(std::abs(self.lhs) < 1e-12);
    CHECK(std::abs(self.rhs) < 1e-12);

    // shifted mean saturates the inequality: both sides equal rho|u'-u|^2/2
    Field u3(XG.n_x, 0.3);
    Distribution m3 = maxwellian(one, u3, 1.0, XG, VG);
    BoundPair p = log_sobolev_check(m3, zero, 1.0);
    CHECK(p.lhs == doctest::Approx(0.045).epsilon(1e-8));
    CHECK(p.lhs <= p.rhs + 1e-8);

    Rng rng(13);
    for (int k = 0; k < 100; ++k) {
        double kap = rng.uniform(0.4, 1.2);
        Distribution f = random_smooth_distribution(rng, XG, VG, kap);
        Field u = random_smooth(rng, XG, 0.5);
        BoundPair q = log_sobolev_check(f, u, kap);
        CHECK(q.lhs <= q.rhs + 1e-8);
    }
}

TEST_CASE("Csiszar-Kullback check") {
    Field one(XG.n_x, 1.0), zero(XG.n_x, 0.0);
    Distribution f = maxwellian(one, zero, 1.0, XG, VG);
    BoundPair self = csiszar_kullback_check(f, f);
    CHECK(self.lhs == 0.0);
    CHECK(std::abs(self.rhs) < 1e-12);

    Field u3(XG.n_x, 0.4);
    Distribution g = maxwellian(one, u3, 1.0, XG, VG);
    BoundPair p = csiszar_kullback_check(f, g);
    CHECK(p.lhs > 1e-4);
    CHECK(p.lhs <= p.rhs + 1e-10);

    Rng rng(15);
    for (int k = 0; k < 100; ++k) {
        double kap = rng.uniform(0.5, 1.2);
        Distribution a = random_smooth_distribution(rng, XG, VG, kap);
        Distribution b = random_smooth_distribution(rng, XG, VG, kap);
        double scale = a.mass() / b.mass();
        for (double& v : b.values) v *= scale;
        BoundPair q = csiszar_kullback_check(a, b);
        CHECK(q.lhs <= q.rhs + 1e-10);
    }

    Distribution heavy = f;
    for (double& v : heavy.values) v *= 2.0;
    CHECK_THROWS_AS(csiszar_kullback_check(f, heavy), MassMismatch);
}

TEST_CASE("w1 distance: identity, point masses, metric axioms") {
    Field one(XG.n_x, 1.0);
    CHECK(w1_distance_1d(one, one, XG) == 0.0);

    // unit masses at 0.2 and 0.3 as two-cell splittings
    auto point_mass = [&](double pos) {
        Field m(XG.n_x, 0.0);
        double p = pos / XG.dx() - 0.5;
        int j0 = static_cast<int>(std::floor(p));
        double theta = p - j0;
        m[XG.wrap(j0)] = (1.0 - theta) / XG.dx();
        m[XG.wrap(j0 + 1)] = theta / XG.dx();
        return m;
    };
    double w = w1_distance_1d(point_mass(0.2), point_mass(0.3), XG);
    CHECK(std::abs(w - 0.1) <= XG.dx());

    Rng rng(17);
    for (int k = 0; k < 50; ++k) {
        Field a = random_smooth_positive(rng, XG, 1.0, 0.4);
        Field b = random_smooth_positive(rng, XG, 1.0, 0.4);
        Field c = random_smooth_positive(rng, XG, 1.0, 0.4);
        double ma = integrate(a, XG);
        double sb = ma / integrate(b, XG);
        for (double& v : b) v *= sb;
        double sc = ma / integrate(c, XG);
        for (double& v : c) v *= sc;
        double ab = w1_distance_1d(a, b, XG);
        CHECK(std::abs(ab - w1_distance_1d(b, a, XG)) <= 1e-10);
        CHECK(ab <= w1_distance_1d(a, c, XG) + w1_distance_1d(c, b, XG) + 1e-10);
    }

    Field heavier(XG.n_x, 1.5);
    CHECK_THROWS_AS(w1_distance_1d(one, heavier, XG), MassMismatch);
}

TEST_CASE("phase-space d_BL bound") {
    Rng rng(19);
    Field rho = random_smooth_positive(rng, XG, 1.0, 0.3);
    Field u = random_smooth(rng, XG, 0.3);

    // exact two-cell monokinetic data: all three components vanish
    Distribution mono = maxwellian(rho, u, 0.0, XG, VG);
    PhaseSpaceBlBound b0 = dbl_phase_space(mono, rho, u);
    CHECK(b0.spread_term <= 2.0 * VG.dv());  // two-cell splitting carries O(dv) spread
    CHECK(b0.drift_term <= 1e-12);
    CHECK(b0.w1_term <= 1e-12);

    // narrow Maxwellian: first component = (sigma^2 int rho)^{1/2}
    double sigma2 = 0.04;
    Distribution narrow = maxwellian(rho, u, sigma2, XG, VG);
    PhaseSpaceBlBound b1 = dbl_phase_space(narrow, rho, u);
    double mass = integrate(rho, XG);
    CHECK(b1.spread_term == doctest::Approx(std::sqrt(sigma2 * mass)).epsilon(1e-6));
    CHECK(b1.spread_term >= 0.0);
    CHECK(b1.drift_term >= 0.0);
    CHECK(b1.w1_term >= 0.0);
    CHECK(b1.total >= 0.0);
}

TEST_CASE("critical term check") {
    Rng rng(21);
    Field rho = random_smooth_positive(rng, XG, 1.0, 0.3);
    Potential base = solve_pb(rho, XG, 1e-12, 60);
    Field rho_e(XG.n_x);
    for (int i = 0; i < XG.n_x; ++i) rho_e[i] = std::exp(base.phi[i]);
    Field ubar = random_smooth(rng, XG, 0.5);

    CriticalTermCheck self = critical_term_check(rho_e, rho_e, ubar, base.phi, base.phi, XG);
    CHECK(self.lhs == 0.0);

    // phi^t = phi: zero gradient difference
    Field rho_e_t = rho_e;
    for (double& v : rho_e_t) v *= 1.1;
    CriticalTermCheck zg = critical_term_check(rho_e_t, rho_e, ubar, base.phi, base.phi, XG);
    CHECK(zg.lhs <= 1e-12);

    // amplitude sweep: ratio bounded and not degrading as amplitude shrinks
    double worst_big = 0.0, worst_small = 0.0;
    for (int k = 0; k < 50; ++k) {
        for (double amp : {0.2, 0.02}) {
            Field pert = random_smooth(rng, XG, amp);
            Field rho_t(XG.n_x);
            for (int i = 0; i < XG.n_x; ++i) rho_t[i] = rho[i] * (1.0 + pert[i]);
            Potential trial = solve_pb(rho_t, XG, 1e-12, 60);
            Field ret(XG.n_x);
            for (int i = 0; i < XG.n_x; ++i) ret[i] = std::exp(trial.phi[i]);
            CriticalTermCheck r =
                critical_term_check(ret, rho_e, ubar, trial.phi, base.phi, XG);
            double ratio = r.lhs / (r.rhs_pressure + r.rhs_grad);
            (amp > 0.1 ? worst_big : worst_small) = std::max(
                amp > 0.1 ? worst_big : worst_small, ratio);
        }
    }
    CHECK(worst_big < 50.0);
    CHECK(worst_small < 50.0);
}

TEST_CASE("augment builds consistent states") {
    Rng rng(23);
    Field rho = random_smooth_positive(rng, XG, 1.0, 0.3);
    Field u = random_smooth(rng, XG, 0.3);
    MacroState U(XG);
    for (int i = 0; i < XG.n_x; ++i) {
        U.rho[i] = rho[i];
        U.momentum[i] = rho[i] * u[i];
    }
    FluidState fs{U, solve_pb(rho, XG, 1e-10), 0.0};
    AugmentedState a = augment(fs);
    for (int i = 0; i < XG.n_x; ++i) {
        CHECK(a.rho[i] == rho[i]);
        CHECK(a.rho_e[i] == doctest::Approx(std::exp(fs.potential.phi[i])).epsilon(1e-15));
    }

    Distribution f = maxwellian(rho, u, 1.0, XG, VG);
    KineticState ks{f, solve_pb(moments(f).rho, XG, 1e-10), 0.0};
    AugmentedState ak = augment(ks);
    for (int i = 0; i < XG.n_x; ++i) CHECK(std::abs(ak.rho[i] - rho[i]) < 1e-9);
}
