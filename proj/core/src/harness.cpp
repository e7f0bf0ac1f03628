#include "ivpfp/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "ivpfp/entropy.hpp"
#include "ivpfp/errors.hpp"
#include "ivpfp/fluid.hpp"
#include "ivpfp/io.hpp"
#include "ivpfp/kinetic.hpp"
#include "ivpfp/maxwellian.hpp"
#include "ivpfp/metrics.hpp"
#include "ivpfp/random_fields.hpp"
#include "ivpfp/spectral.hpp"

namespace ivpfp {

void StudyConfig::validate() const {
    if (tau_list.empty()) throw GridError("StudyConfig: tau_list empty");
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
        if (!(tau_list[i] > 0)) throw GridError("StudyConfig: tau must be positive");
        if (i > 0 && !(tau_list[i] < tau_list[i - 1]))
            throw GridError("StudyConfig: tau_list must be strictly decreasing");
    }
    if (fluid_nx < 4 * kinetic_nx)
        throw GridError("StudyConfig: fluid grid must be at least 4x the kinetic grid");
    if (fluid_nx % kinetic_nx != 0)
        throw GridError("StudyConfig: fluid_nx must be a multiple of kinetic_nx");
    if (n_snapshots < 1) throw GridError("StudyConfig: n_snapshots must be >= 1");
}

StudyConfig StudyConfig::from_kv(const std::map<std::string, std::string>& kv) {
    StudyConfig c;
    c.rho0_fourier = io::get_list(kv, "rho0_fourier", c.rho0_fourier);
    c.u0_fourier = io::get_list(kv, "u0_fourier", c.u0_fourier);
    c.kappa = io::get_double(kv, "kappa", c.kappa);
    c.tau_list = io::get_list(kv, "tau_list", c.tau_list);
    c.kinetic_nx = io::get_int(kv, "kinetic_nx", c.kinetic_nx);
    c.kinetic_nv = io::get_int(kv, "kinetic_nv", c.kinetic_nv);
    c.v_max = io::get_double(kv, "vmax", c.v_max);
    c.length = io::get_double(kv, "length", c.length);
    c.fluid_nx = io::get_int(kv, "fluid_nx", c.fluid_nx);
    c.t_end = io::get_double(kv, "t_end", c.t_end);
    c.n_snapshots = io::get_int(kv, "n_snapshots", c.n_snapshots);
    c.dt_cfl_factor = io::get_double(kv, "dt_cfl_factor", c.dt_cfl_factor);
    c.pb_tol = io::get_double(kv, "pb_tol", c.pb_tol);
    c.energy_tol = io::get_double(kv, "energy_tol", c.energy_tol);
    c.boundary_mass_tol = io::get_double(kv, "boundary_mass_tol", c.boundary_mass_tol);
    c.seed = static_cast<std::uint64_t>(io::get_double(kv, "seed", static_cast<double>(c.seed)));
    c.self_test = io::get_bool(kv, "self_test", c.self_test);
    c.fluid_second_order = io::get_bool(kv, "fluid_second_order", c.fluid_second_order);
    c.dump_fields = io::get_bool(kv, "dump_fields", c.dump_fields);
    c.jobs = io::get_int(kv, "jobs", c.jobs);
    return c;
}

RateFit rate_fit(const std::vector<double>& taus, const std::vector<double>& values) {
    if (taus.size() != values.size() || taus.size() < 3)
        throw GridError("rate_fit: need at least 3 matching points");
    const std::size_t n = taus.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(values[i] > 0)) throw NonpositiveValue("rate_fit: values must be positive");
        if (!(taus[i] > 0)) throw NonpositiveValue("rate_fit: taus must be positive");
        lx[i] = std::log(taus[i]);
        ly[i] = std::log(values[i]);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double denom = n * sxx - sx * sx;
    RateFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

Distribution well_prepared_ic(const Field& rho0, const Field& u0, double kappa,
                              double tau, const SpatialGrid& xg, const VelocityGrid& vg) {
    // kappa > 0: local Maxwellian at temperature kappa (modulated energy and
    // entropy gaps both vanish). kappa = 0: Maxwellian at temperature tau, an
    // O(sqrt tau)-prepared smoothing of the monokinetic ansatz whose moments
    // match (rho0, u0) exactly.
    return maxwellian(rho0, u0, kappa > 0.0 ? kappa : tau, xg, vg);
}

namespace {

MacroState restrict_macro(const MacroState& fine, const SpatialGrid& coarse) {
    int ratio = fine.grid.n_x / coarse.n_x;
    MacroState out(coarse);
    for (int i = 0; i < coarse.n_x; ++i) {
        double r = 0.0, m = 0.0;
        for (int k = 0; k < ratio; ++k) {
            r += fine.rho[i * ratio + k];
            m += fine.momentum[i * ratio + k];
        }
        out.rho[i] = r / ratio;
        out.momentum[i] = m / ratio;
    }
    return out;
}

struct ReferenceSnapshot {
    AugmentedState aug;
    Field u;
    Field phi;
    double u_w1inf;  // 1 + ||u||_inf + ||u'||_inf
};

double trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
        s += 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);
    return s;
}

}  // namespace

StudyResult convergence_study(const StudyConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    const SpatialGrid kin_grid(cfg.kinetic_nx, cfg.length);
    const SpatialGrid fluid_grid(cfg.fluid_nx, cfg.length);
    const VelocityGrid vgrid(cfg.kinetic_nv, cfg.v_max);

    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    Field rho0_kin = fourier_field(cfg.rho0_fourier, kin_grid);
    Field u0_kin = fourier_field(cfg.u0_fourier, kin_grid);
    Potential pot0 = solve_pb(rho0_kin, kin_grid, cfg.pb_tol);
    double e_max = linf_norm(pot0.e_field);

    // Kinetic time step is tau-independent (CFL is set by the grid and the
    // initial field); the fluid reference runs at a quarter of it or less.
    double dt_bound = cfg.dt_cfl_factor * kin_grid.dx() / vgrid.v_max;
    if (e_max > 0.0)
        dt_bound = std::min(dt_bound, cfg.dt_cfl_factor * vgrid.dv() / e_max);
    double snap_dt = cfg.t_end / cfg.n_snapshots;
    int steps_per_snap = std::max(1, static_cast<int>(std::ceil(snap_dt / dt_bound - 1e-12)));
    double dt_kin = snap_dt / steps_per_snap;

    SimConfig fluid_cfg;
    fluid_cfg.kappa = cfg.kappa;
    fluid_cfg.tau = 1.0;  // unused by the fluid
    fluid_cfg.t_end = cfg.t_end;
    fluid_cfg.dt_cfl_factor = cfg.dt_cfl_factor;
    fluid_cfg.pb_tol = cfg.pb_tol;

    Field rho0_fluid = fourier_field(cfg.rho0_fourier, fluid_grid);
    Field u0_fluid = fourier_field(cfg.u0_fourier, fluid_grid);
    MacroState U0(fluid_grid);
    for (int i = 0; i < fluid_grid.n_x; ++i) {
        U0.rho[i] = rho0_fluid[i];
        U0.momentum[i] = rho0_fluid[i] * u0_fluid[i];
    }
    FluidOptions fopts;
    fopts.second_order = cfg.fluid_second_order;
    fopts.pb_tol = cfg.pb_tol;
    FluidRun ref = run_fluid(fluid_cfg, U0, cfg.n_snapshots, fopts, dt_kin / 4.0);

    // Restrict the reference to the kinetic grid; the coarse potential is
    // re-solved from the restricted density so the reference augmented state
    // satisfies the discrete Poisson-Boltzmann equation.
    std::vector<ReferenceSnapshot> refs;
    refs.reserve(ref.snapshots.size());
    {
        Spectral1D& sp = spectral_for(kin_grid);
        for (const auto& s : ref.snapshots) {
            MacroState mc = restrict_macro(s.macro, kin_grid);
            Potential pc = solve_pb(mc.rho, kin_grid, cfg.pb_tol);
            ReferenceSnapshot r{AugmentedState{kin_grid, mc.rho, mc.momentum, pc.e_field,
                                               Field(kin_grid.n_x)},
                                bulk_velocity(mc), pc.phi, 0.0};
            for (int i = 0; i < kin_grid.n_x; ++i) r.aug.rho_e[i] = std::exp(pc.phi[i]);
            Field du = sp.derivative(r.u);
            r.u_w1inf = 1.0 + linf_norm(r.u) + linf_norm(du);
            refs.push_back(std::move(r));
        }
    }

    auto run_one_tau = [&](double tau) -> std::pair<ConvergenceRow, DiagnosticsRecord> {
        auto t_start = std::chrono::steady_clock::now();
        ConvergenceRow row;
        row.tau = tau;

        std::vector<double> times, ptensor, dblf2;
        DiagnosticsRecord diag;

        auto account = [&](std::size_t s, const AugmentedState& trial,
                           const Distribution* f) {
            const ReferenceSnapshot& r = refs[s];
            double t = s * snap_dt;
            ModulatedEnergyReport rep = modulated_energy(trial, r.aug, cfg.kappa, t);
            row.sup_total = std::max(row.sup_total, rep.total);
            row.sup_kinetic_term = std::max(row.sup_kinetic_term, rep.kinetic_term);
            row.sup_pressure_term = std::max(row.sup_pressure_term, rep.pressure_term);
            row.sup_field_term = std::max(row.sup_field_term, rep.field_term);
            row.sup_electron_term = std::max(row.sup_electron_term, rep.electron_term);

            double drho = 0.0, drhoe = 0.0;
            for (int i = 0; i < kin_grid.n_x; ++i) {
                drho += std::abs(trial.rho[i] - r.aug.rho[i]);
                drhoe += std::abs(trial.rho_e[i] - r.aug.rho_e[i]);
            }
            drho *= kin_grid.dx();
            drhoe *= kin_grid.dx();
            row.sup_rho_l1_sq = std::max(row.sup_rho_l1_sq, drho * drho);
            row.sup_rhoe_l1_sq = std::max(row.sup_rhoe_l1_sq, drhoe * drhoe);

            times.push_back(t);
            if (f) {
                // Pressure-tensor error against the reference density.
                const VelocityGrid& vg = f->vgrid;
                Field ut(kin_grid.n_x, 0.0);
                for (int i = 0; i < kin_grid.n_x; ++i)
                    ut[i] = trial.rho[i] > vacuum_floor ? trial.momentum[i] / trial.rho[i] : 0.0;
                double perr = 0.0;
                for (int i = 0; i < kin_grid.n_x; ++i) {
                    double p = 0.0;
                    for (int j = 0; j < vg.n_v; ++j) {
                        double w = vg.center(j) - ut[i];
                        p += w * w * (*f)(i, j);
                    }
                    p *= vg.dv();
                    perr += std::abs(p - cfg.kappa * r.aug.rho[i]);
                }
                ptensor.push_back(perr * kin_grid.dx());

                // Velocity-domain truncation may cost the kinetic side up to
                // the leak budget in mass; normalize the reference density to
                // the trial mass before the equal-mass transport bounds.
                Field rho_ref = r.aug.rho;
                double mscale = integrate(trial.rho, kin_grid) / integrate(rho_ref, kin_grid);
                for (double& v : rho_ref) v *= mscale;

                double w1r = w1_distance_1d(trial.rho, rho_ref, kin_grid);
                row.sup_dbl_rho_sq = std::max(row.sup_dbl_rho_sq, w1r * w1r);
                double drift2 = 0.0;
                for (int i = 0; i < kin_grid.n_x; ++i)
                    drift2 += trial.rho[i] * (ut[i] - r.u[i]) * (ut[i] - r.u[i]);
                drift2 *= kin_grid.dx();
                double mass_t = integrate(trial.rho, kin_grid);
                double bmom = std::sqrt(mass_t) * std::sqrt(std::max(0.0, drift2)) +
                              r.u_w1inf * w1r;
                row.sup_dbl_mom_sq = std::max(row.sup_dbl_mom_sq, bmom * bmom);
                PhaseSpaceBlBound bl = dbl_phase_space(*f, rho_ref, r.u);
                dblf2.push_back(bl.total * bl.total);
            } else {
                ptensor.push_back(0.0);
                dblf2.push_back(0.0);
            }
        };

        if (cfg.self_test) {
            for (std::size_t s = 0; s < refs.size(); ++s) account(s, refs[s].aug, nullptr);
        } else {
            SimConfig kc;
            kc.kappa = cfg.kappa;
            kc.tau = tau;
            kc.t_end = cfg.t_end;
            kc.dt_cfl_factor = cfg.dt_cfl_factor;
            kc.pb_tol = cfg.pb_tol;
            kc.energy_tol = cfg.energy_tol;
            kc.boundary_mass_tol = cfg.boundary_mass_tol;
            kc.seed = cfg.seed;
            Distribution f0 = well_prepared_ic(rho0_kin, u0_kin, cfg.kappa, tau, kin_grid, vgrid);
            KineticRun run = run_kinetic(kc, f0, cfg.n_snapshots);
            diag = run.diagnostics;
            for (std::size_t s = 0; s < run.snapshots.size(); ++s)
                account(s, augment(run.snapshots[s]), &run.snapshots[s].f);
        }

        row.tail_metric = cfg.kappa > 0.0 ? trapezoid(times, ptensor) : trapezoid(times, dblf2);
        row.int_dbl_f_sq = trapezoid(times, dblf2);
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return {row, std::move(diag)};
    };

    // tau rows are independent jobs; results are merged in tau order.
    const int n_tau = static_cast<int>(cfg.tau_list.size());
    int jobs = cfg.jobs > 0 ? cfg.jobs
                            : static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, n_tau));

    std::vector<std::pair<ConvergenceRow, DiagnosticsRecord>> results(n_tau);
    if (jobs == 1) {
        for (int k = 0; k < n_tau; ++k) results[k] = run_one_tau(cfg.tau_list[k]);
    } else {
        std::vector<std::future<std::pair<ConvergenceRow, DiagnosticsRecord>>> futs;
        futs.reserve(n_tau);
        for (int k = 0; k < n_tau; ++k)
            futs.push_back(std::async(std::launch::async, run_one_tau, cfg.tau_list[k]));
        for (int k = 0; k < n_tau; ++k) results[k] = futs[k].get();
    }

    StudyResult result;
    for (auto& [row, diag] : results) result.rows.push_back(row);

    auto fit_metric = [&](const std::string& name, auto getter, bool square) {
        std::vector<double> vals;
        for (const auto& row : result.rows) {
            double v = getter(row);
            if (square) v *= v;
            if (!(v > 0.0)) return;  // degenerate (self-test) columns are skipped
            vals.push_back(v);
        }
        if (vals.size() >= 3)
            result.rates.emplace_back(name, rate_fit(cfg.tau_list, vals));
    };
    fit_metric("sup_modulated_energy", [](const ConvergenceRow& r) { return r.sup_total; }, false);
    fit_metric("sup_field_term", [](const ConvergenceRow& r) { return r.sup_field_term; }, false);
    fit_metric("sup_rho_l1_sq", [](const ConvergenceRow& r) { return r.sup_rho_l1_sq; }, false);
    fit_metric("sup_rhoe_l1_sq", [](const ConvergenceRow& r) { return r.sup_rhoe_l1_sq; }, false);
    if (cfg.kappa > 0.0)
        fit_metric("int_ptensor_err_sq", [](const ConvergenceRow& r) { return r.tail_metric; }, true);
    fit_metric("sup_dbl_rho_sq", [](const ConvergenceRow& r) { return r.sup_dbl_rho_sq; }, false);
    fit_metric("sup_dbl_mom_sq", [](const ConvergenceRow& r) { return r.sup_dbl_mom_sq; }, false);
    fit_metric("int_dbl_f_sq", [](const ConvergenceRow& r) { return r.int_dbl_f_sq; }, false);

    if (!out_dir.empty()) {
        write_study(result, cfg, out_dir);
        for (int k = 0; k < n_tau; ++k) {
            std::ostringstream name;
            name << out_dir << "/diag_tau_" << io::format_double(cfg.tau_list[k]) << ".csv";
            io::write_diagnostics(name.str(), results[k].second);
        }
        io::write_fluid_log(out_dir + "/fluid_log.csv", ref.log);
        if (cfg.dump_fields) {
            for (std::size_t s = 0; s < ref.snapshots.size(); ++s) {
                std::ostringstream name;
                name << out_dir << "/fluid_snapshot_" << s << ".csv";
                io::write_fluid_snapshot(name.str(), ref.snapshots[s], ref.electron[s]);
            }
        }
    }
    return result;
}

void write_study(const StudyResult& result, const StudyConfig& cfg,
                 const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream rows(out_dir + "/rows.csv");
        rows << "tau,sup_total,sup_kinetic_term,sup_pressure_term,sup_field_term,"
                "sup_electron_term,sup_rho_l1_sq,sup_rhoe_l1_sq,tail_metric,"
                "sup_dbl_rho_sq,sup_dbl_mom_sq,int_dbl_f_sq\n";
        for (const auto& r : result.rows)
            rows << io::format_double(r.tau) << ',' << io::format_double(r.sup_total) << ','
                 << io::format_double(r.sup_kinetic_term) << ','
                 << io::format_double(r.sup_pressure_term) << ','
                 << io::format_double(r.sup_field_term) << ','
                 << io::format_double(r.sup_electron_term) << ','
                 << io::format_double(r.sup_rho_l1_sq) << ','
                 << io::format_double(r.sup_rhoe_l1_sq) << ','
                 << io::format_double(r.tail_metric) << ','
                 << io::format_double(r.sup_dbl_rho_sq) << ','
                 << io::format_double(r.sup_dbl_mom_sq) << ','
                 << io::format_double(r.int_dbl_f_sq) << '\n';
    }
    {
        std::ofstream rates(out_dir + "/rates.csv");
        rates << "metric,slope,intercept,residual\n";
        for (const auto& [name, fit] : result.rates)
            rates << name << ',' << io::format_double(fit.slope) << ','
                  << io::format_double(fit.intercept) << ','
                  << io::format_double(fit.residual) << '\n';
    }
    {
        std::ofstream times(out_dir + "/timings.csv");
        times << "tau,wall_seconds\n";
        for (const auto& r : result.rows)
            times << io::format_double(r.tau) << ',' << io::format_double(r.wall_seconds)
                  << '\n';
    }
    (void)cfg;
}

}  // namespace ivpfp
