#include <benchmark/benchmark.h>

#include "ehsoc/config.hpp"
#include "ehsoc/policies.hpp"
#include "ehsoc/solver.hpp"

using namespace ehsoc;

namespace {

SystemModel system_at(int e_max, int iota_steps) { return make_system(ExperimentConfig{}, e_max, iota_steps); }

}  // namespace

static void BM_IntegrateSlot(benchmark::State& state) {
  const LossModel model(1.05, 100);
  SlotIntegrator integ;
  integ.method = state.range(0) ? SlotIntegrator::Method::rk4 : SlotIntegrator::Method::closed_form_tanh;
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_slot(x, 37.0, model, integ));
    x = x > 49.0 ? 0.5 : x + 0.5;
  }
}
BENCHMARK(BM_IntegrateSlot)->Arg(0)->Arg(1);

static void BM_BuildMdp(benchmark::State& state) {
  const SystemModel model = system_at(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(build_mdp(model));
}
BENCHMARK(BM_BuildMdp)->Args({100, 1})->Args({100, 11})->Unit(benchmark::kMillisecond);

static void BM_SolveRvi(benchmark::State& state) {
  const EhMdp mdp = build_mdp(system_at(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
  long sweeps = 0;
  for (auto _ : state) sweeps = solve_rvi(mdp).iterations;
  state.counters["sweeps"] = static_cast<double>(sweeps);
}
BENCHMARK(BM_SolveRvi)->Args({100, 1})->Args({100, 11})->Args({140, 1})->Unit(benchmark::kMillisecond);

static void BM_Evaluate(benchmark::State& state) {
  const EhMdp mdp = build_mdp(system_at(100, 1));
  const Policy op = solve_rvi(mdp).policy;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(mdp, op));
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);

static void BM_Simulate(benchmark::State& state) {
  const EhMdp mdp = build_mdp(system_at(100, 1));
  const Policy op = solve_rvi(mdp).policy;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(mdp, op, state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
