#include <benchmark/benchmark.h>

#include <cmath>

#include "ivpfp/harness.hpp"
#include "ivpfp/kinetic.hpp"
#include "ivpfp/maxwellian.hpp"
#include "ivpfp/metrics.hpp"
#include "ivpfp/poisson_boltzmann.hpp"

using namespace ivpfp;

static void BM_SolvePb(benchmark::State& state) {
    SpatialGrid g(static_cast<int>(state.range(0)), 1.0);
    Field rho(g.n_x);
    for (int i = 0; i < g.n_x; ++i) rho[i] = 1.0 + 0.5 * std::cos(2.0 * M_PI * g.center(i));
    for (auto _ : state) {
        Potential p = solve_pb(rho, g, 1e-10);
        benchmark::DoNotOptimize(p.residual_norm);
    }
}
BENCHMARK(BM_SolvePb)->Arg(64)->Arg(256)->Arg(1024);

static void BM_CollisionStep(benchmark::State& state) {
    SpatialGrid xg(64, 1.0);
    VelocityGrid vg(static_cast<int>(state.range(0)), 8.0);
    Field rho = fourier_field({1.0, 0.2}, xg);
    Field u = fourier_field({0.0, 0.0, 0.1}, xg);
    Distribution f = maxwellian(rho, u, 1.0, xg, vg);
    for (auto _ : state) {
        Distribution g = step_collision(f, 1.0, 0.05, 1e-3);
        benchmark::DoNotOptimize(g.values.data());
    }
}
BENCHMARK(BM_CollisionStep)->Arg(128)->Arg(256);

static void BM_VpfpStep(benchmark::State& state) {
    SpatialGrid xg(64, 1.0);
    VelocityGrid vg(128, 8.0);
    SimConfig cfg;
    Field rho = fourier_field({1.0, 0.2}, xg);
    Field u = fourier_field({0.0, 0.0, 0.1}, xg);
    Distribution f0 = maxwellian(rho, u, cfg.kappa, xg, vg);
    KineticState st{f0, solve_pb(moments(f0).rho, xg, cfg.pb_tol), 0.0};
    double dt = cfg.dt_cfl_factor * xg.dx() / vg.v_max;
    for (auto _ : state) {
        DiagnosticsRecord diag;
        KineticState next = vpfp_step(st, dt, cfg, diag);
        benchmark::DoNotOptimize(next.time);
    }
}
BENCHMARK(BM_VpfpStep);

static void BM_W1Distance(benchmark::State& state) {
    SpatialGrid g(static_cast<int>(state.range(0)), 1.0);
    Field mu = fourier_field({1.0, 0.3}, g);
    Field nu = fourier_field({1.0, 0.0, 0.3}, g);
    for (auto _ : state) {
        double w = w1_distance_1d(mu, nu, g);
        benchmark::DoNotOptimize(w);
    }
}
BENCHMARK(BM_W1Distance)->Arg(256)->Arg(4096);

static void BM_RateFit(benchmark::State& state) {
    std::vector<double> taus{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> vals;
    for (double t : taus) vals.push_back(3.0 * std::sqrt(t));
    for (auto _ : state) {
        RateFit f = rate_fit(taus, vals);
        benchmark::DoNotOptimize(f.slope);
    }
}
BENCHMARK(BM_RateFit);

BENCHMARK_MAIN();
