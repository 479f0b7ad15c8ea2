#include <benchmark/benchmark.h>

#include "kpp/cell.hpp"
#include "kpp/eigenproblem.hpp"
#include "kpp/frontsim.hpp"
#include "kpp/grid.hpp"
#include "kpp/halfspace.hpp"
#include "kpp/speed.hpp"

namespace {

kpp::PeriodicScalarField medium_1d(int n) {
  return kpp::build_field(
      kpp::MuSpec::trig(1, 1.0, {kpp::TrigTerm{{1, 0}, 0.0, 0.5}}),
      kpp::TorusGrid(1, n));
}

kpp::PeriodicScalarField medium_2d(int n) {
  return kpp::build_field(
      kpp::MuSpec::trig(2, 1.0,
                        {kpp::TrigTerm{{1, 0}, 0.3, 0.0},
                         kpp::TrigTerm{{0, 1}, 0.5, 0.0}}),
      kpp::TorusGrid(2, n));
}

void bm_laplacian_2d(benchmark::State& state) {
  const auto mu = medium_2d(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kpp::laplacian(mu));
  }
}
BENCHMARK(bm_laplacian_2d)->Arg(32)->Arg(64);

void bm_eigenpair_1d(benchmark::State& state) {
  const auto mu = medium_1d(64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kpp::principal_eigenpair(mu, {1.0, 0.0}, 1.0));
  }
}
BENCHMARK(bm_eigenpair_1d);

void bm_eigenpair_2d_warm(benchmark::State& state) {
  const auto mu = medium_2d(32);
  kpp::EigenPair warm = kpp::principal_eigenpair(mu, kpp::unit(0.3), 1.0);
  kpp::EigenOptions eo;
  eo.warm_start = &warm.psi;
  double lambda = 1.0;
  for (auto _ : state) {
    lambda = lambda == 1.0 ? 1.01 : 1.0;
    benchmark::DoNotOptimize(
        kpp::principal_eigenpair(mu, kpp::unit(0.3), lambda, eo));
  }
}
BENCHMARK(bm_eigenpair_2d_warm);

void bm_minimal_speed_1d(benchmark::State& state) {
  const auto mu = medium_1d(64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kpp::minimal_speed(mu, {1.0, 0.0}));
  }
}
BENCHMARK(bm_minimal_speed_1d);

void bm_simulation_step(benchmark::State& state) {
  kpp::SimConfig sc;
  sc.dim = 1;
  sc.mu = kpp::MuSpec::constant(1, 1.0);
  sc.domain_half_width = static_cast<double>(state.range(0));
  sc.points_per_cell = 16;
  sc.dt = 0.05;
  sc.t_final = 1.0;  // 20 steps per iteration
  sc.trace_dt = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kpp::run_simulation(sc));
  }
  state.SetItemsProcessed(state.iterations() * 20 *
                          static_cast<long>(2 * state.range(0) * 16));
}
BENCHMARK(bm_simulation_step)->Arg(200)->Arg(1000);

void bm_halfspace_1d(benchmark::State& state) {
  const auto mu = kpp::build_field(kpp::MuSpec::constant(1, 1.0),
                                   kpp::TorusGrid(1, 64));
  const kpp::FrameSetup fs = kpp::make_frame_setup(mu, {1.0, 0.0});
  kpp::HalfspaceConfig hc;
  hc.xi_max = 100.0;
  hc.points_per_cell = 16;
  hc.dt = 0.05;
  hc.t_final = 10.0;  // 200 steps per iteration
  for (auto _ : state) {
    benchmark::DoNotOptimize(kpp::run_linear_frame(fs, hc));
  }
}
BENCHMARK(bm_halfspace_1d);

}  // namespace

BENCHMARK_MAIN();
