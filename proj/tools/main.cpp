#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ivpfp/harness.hpp"
#include "ivpfp/io.hpp"
#include "ivpfp/kinetic.hpp"
#include "ivpfp/maxwellian.hpp"

namespace {

using namespace ivpfp;

SimConfig sim_config_from(const std::map<std::string, std::string>& kv) {
    SimConfig c;
    c.kappa = io::get_double(kv, "kappa", c.kappa);
    c.tau = io::get_double(kv, "tau", c.tau);
    c.t_end = io::get_double(kv, "t_end", c.t_end);
    c.dt_cfl_factor = io::get_double(kv, "dt_cfl_factor", c.dt_cfl_factor);
    c.stabilizer_epsilon = io::get_double(kv, "stabilizer_epsilon", c.stabilizer_epsilon);
    c.pb_tol = io::get_double(kv, "pb_tol", c.pb_tol);
    c.energy_tol = io::get_double(kv, "energy_tol", c.energy_tol);
    c.boundary_mass_tol = io::get_double(kv, "boundary_mass_tol", c.boundary_mass_tol);
    c.seed = static_cast<std::uint64_t>(io::get_double(kv, "seed", static_cast<double>(c.seed)));
    return c;
}

int cmd_pb_solve(const std::string& rho_path, const std::string& out_path, double tol,
                 int max_iter) {
    auto [rho, grid] = io::read_field(rho_path);
    Potential pot = solve_pb(rho, grid, tol, max_iter);

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot open " << out_path << "\n";
        return 1;
    }
    out << "x,phi,e_field,rho_e\n";
    for (int i = 0; i < grid.n_x; ++i)
        out << io::format_double(grid.center(i)) << ',' << io::format_double(pot.phi[i])
            << ',' << io::format_double(pot.e_field[i]) << ','
            << io::format_double(std::exp(pot.phi[i])) << '\n';

    Field ephi(grid.n_x);
    for (int i = 0; i < grid.n_x; ++i) ephi[i] = std::exp(pot.phi[i]);
    std::cout << "residual " << io::format_double(pot.residual_norm) << " neutrality "
              << io::format_double(std::abs(integrate(ephi, grid) - integrate(rho, grid)))
              << "\n";
    return 0;
}

int cmd_run_kinetic(const std::string& config_path, const std::string& out_dir) {
    auto kv = io::read_config(config_path);
    SimConfig cfg = sim_config_from(kv);
    SpatialGrid xg(io::get_int(kv, "nx", 64), io::get_double(kv, "length", 1.0));
    VelocityGrid vg(io::get_int(kv, "nv", 128), io::get_double(kv, "vmax", 8.0));
    int n_snapshots = io::get_int(kv, "n_snapshots", 20);

    Field rho0 = fourier_field(io::get_list(kv, "rho0_fourier", {1.0, 0.2}), xg);
    Field u0 = fourier_field(io::get_list(kv, "u0_fourier", {0.0, 0.0, 0.1}), xg);
    double ic_kappa = cfg.kappa > 0.0 ? cfg.kappa : cfg.tau;
    Distribution f0 = maxwellian(rho0, u0, ic_kappa, xg, vg);

    KineticRun run = run_kinetic(cfg, f0, n_snapshots);

    std::filesystem::create_directories(out_dir);
    io::write_diagnostics(out_dir + "/diagnostics.csv", run.diagnostics);
    if (io::get_bool(kv, "dump_fields", false)) {
        for (std::size_t s = 0; s < run.snapshots.size(); ++s)
            io::write_distribution(out_dir + "/f_" + std::to_string(s) + ".csv",
                                   run.snapshots[s].f);
    }
    std::cout << "steps dt " << io::format_double(run.dt) << ", "
              << run.diagnostics.samples.size() - 1 << " steps, final mass "
              << io::format_double(run.diagnostics.samples.back().mass) << "\n";
    return 0;
}

int cmd_run_fluid(const std::string& config_path, const std::string& out_dir) {
    auto kv = io::read_config(config_path);
    SimConfig cfg = sim_config_from(kv);
    SpatialGrid g(io::get_int(kv, "nx", 256), io::get_double(kv, "length", 1.0));
    int n_snapshots = io::get_int(kv, "n_snapshots", 20);

    Field rho0 = fourier_field(io::get_list(kv, "rho0_fourier", {1.0, 0.2}), g);
    Field u0 = fourier_field(io::get_list(kv, "u0_fourier", {0.0, 0.0, 0.1}), g);
    MacroState U0(g);
    for (int i = 0; i < g.n_x; ++i) {
        U0.rho[i] = rho0[i];
        U0.momentum[i] = rho0[i] * u0[i];
    }
    FluidOptions opts;
    opts.second_order = io::get_bool(kv, "fluid_second_order", false);
    opts.pb_tol = cfg.pb_tol;

    FluidRun run = run_fluid(cfg, U0, n_snapshots, opts);

    std::filesystem::create_directories(out_dir);
    io::write_fluid_log(out_dir + "/fluid_log.csv", run.log);
    for (std::size_t s = 0; s < run.snapshots.size(); ++s)
        io::write_fluid_snapshot(out_dir + "/fluid_snapshot_" + std::to_string(s) + ".csv",
                                 run.snapshots[s], run.electron[s]);
    std::cout << "dt " << io::format_double(run.dt) << ", final energy "
              << io::format_double(run.log.back().energy) << "\n";
    return 0;
}

int cmd_converge(const std::string& config_path, const std::string& out_dir) {
    auto kv = io::read_config(config_path);
    StudyConfig cfg = StudyConfig::from_kv(kv);
    StudyResult res = convergence_study(cfg, out_dir);
    for (const auto& [name, fit] : res.rates)
        std::cout << name << " slope " << io::format_double(fit.slope) << "\n";
    return 0;
}

int cmd_check(std::uint64_t seed) {
    CheckReport rep = check_suite(seed);
    std::cout << "check,pass,details\n";
    for (const auto& e : rep.entries)
        std::cout << e.name << ',' << (e.pass ? 1 : 0) << ',' << e.details << "\n";
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ionic Vlasov-Poisson-Fokker-Planck laboratory"};
    app.require_subcommand(1);

    std::string rho_path, out_path, config_path, out_dir = "out";
    double tol = 1e-10;
    int max_iter = 50;
    std::uint64_t seed = 2026;

    auto* pb = app.add_subcommand("pb-solve", "solve the Poisson-Boltzmann equation");
    pb->add_option("--rho", rho_path, "density field file")->required();
    pb->add_option("--out", out_path, "output CSV")->required();
    pb->add_option("--tol", tol, "residual tolerance");
    pb->add_option("--max-iter", max_iter, "Newton iteration cap");

    auto* rk = app.add_subcommand("run-kinetic", "integrate the VPFP system");
    rk->add_option("--config", config_path, "config file")->required();
    rk->add_option("--out", out_dir, "output directory");

    auto* rf = app.add_subcommand("run-fluid", "integrate the Euler-Poisson system");
    rf->add_option("--config", config_path, "config file")->required();
    rf->add_option("--out", out_dir, "output directory");

    auto* cv = app.add_subcommand("converge", "tau-sweep convergence study");
    cv->add_option("--config", config_path, "config file")->required();
    cv->add_option("--out", out_dir, "output directory")->required();

    auto* ck = app.add_subcommand("check", "run the randomized property suites");
    ck->add_option("--seed", seed, "rng seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pb->parsed()) return cmd_pb_solve(rho_path, out_path, tol, max_iter);
        if (rk->parsed()) return cmd_run_kinetic(config_path, out_dir);
        if (rf->parsed()) return cmd_run_fluid(config_path, out_dir);
        if (cv->parsed()) return cmd_converge(config_path, out_dir);
        if (ck->parsed()) return cmd_check(seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
