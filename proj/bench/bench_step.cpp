// Serial vs OpenMP stepping of a large synthetic world.
#include <benchmark/benchmark.h>

#include <memory>

#include "scenario_gen.hpp"
#include "sopra/engine.hpp"

namespace {

std::shared_ptr<const sopra::Scenario> population(std::size_t agents) {
  sopra::testing::PopulationOptions o;
  o.agents = agents;
  o.locations = agents / 10 + 1;
  o.seed = 99;
  return std::make_shared<const sopra::Scenario>(sopra::Scenario::build(sopra::testing::synthetic_population(o)));
}

void step_world(benchmark::State& state, sopra::ExecutionPolicy policy) {
  const auto scenario = population(static_cast<std::size_t>(state.range(0)));
  sopra::World world(scenario, 7);
  for (auto _ : state) {
    world.step(policy);
    benchmark::DoNotOptimize(world.events().size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StepSerial(benchmark::State& state) { step_world(state, sopra::ExecutionPolicy::Serial); }
void BM_StepParallel(benchmark::State& state) { step_world(state, sopra::ExecutionPolicy::Parallel); }

}  // namespace

BENCHMARK(BM_StepSerial)->Arg(100)->Arg(1000)->Arg(5000);
BENCHMARK(BM_StepParallel)->Arg(100)->Arg(1000)->Arg(5000);

BENCHMARK_MAIN();
