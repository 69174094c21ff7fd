#include <benchmark/benchmark.h>

#include "nlbuffer/kernel.hpp"
#include "nlbuffer/limit_infinity.hpp"
#include "nlbuffer/studies.hpp"
#include "support.hpp"

namespace {

// One step of a solver on the congested junction; range(0) is 1/dx.
void step_loop(benchmark::State& state, nlb::Scenario s) {
  auto solver = nlb::make_solver(s);
  const double dt = solver->max_dt();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver->step(dt));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long>(s.grid.cells1() + s.grid.cells2()));
}

void BM_NonlocalStep(benchmark::State& state) {
  const double dx = 1.0 / static_cast<double>(state.range(0));
  const double eta = static_cast<double>(state.range(1)) * 1e-3;
  step_loop(state, nlb::testing::congested_junction(0.15, nlb::KernelKind::linear, eta, dx));
}
BENCHMARK(BM_NonlocalStep)
    ->ArgsProduct({{200, 1000}, {5, 500}})
    ->ArgNames({"cells_per_unit", "eta_milli"});

void BM_HertyStep(benchmark::State& state) {
  const double dx = 1.0 / static_cast<double>(state.range(0));
  step_loop(state, nlb::testing::congested_junction(0.15, nlb::KernelKind::linear, 0.5, dx,
                                                    nlb::ModelKind::local_herty));
}
BENCHMARK(BM_HertyStep)->Arg(200)->Arg(1000)->ArgName("cells_per_unit");

void BM_LimitStep(benchmark::State& state) {
  const double dx = 1.0 / static_cast<double>(state.range(0));
  nlb::Scenario s = nlb::testing::box_datum(2.0, dx);
  s.model = nlb::ModelKind::limit_infinity_case;
  step_loop(state, s);
}
BENCHMARK(BM_LimitStep)->Arg(100)->Arg(1000)->ArgName("cells_per_unit");

void BM_NonlocalLargeRange(benchmark::State& state) {
  // Box datum at eta = 300: the kernel covers the whole network.
  step_loop(state, nlb::testing::box_datum(300.0, 0.01));
}
BENCHMARK(BM_NonlocalLargeRange);

void BM_BuildKernel(benchmark::State& state) {
  const double eta = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        nlb::build_discrete_kernel({nlb::KernelKind::quadratic, eta}, 1e-3));
  }
}
BENCHMARK(BM_BuildKernel)->Arg(1)->Arg(300)->ArgName("eta");

}  // namespace

BENCHMARK_MAIN();
