#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "pphpc/rng.hpp"
#include "pphpc/sim.hpp"
#include "pphpc/stats.hpp"

using namespace pphpc;

namespace {

SimParams scaled_params(std::int64_t side) {
  SimParams p;
  p.grid_x = side;
  p.grid_y = side;
  p.init_prey = side * side / 25;
  p.init_predators = side * side / 50;
  p.iterations = 100;
  return p;
}

void BM_SimulationRun(benchmark::State& state) {
  const SimParams p = scaled_params(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_simulation(p, seed++));
  }
  state.SetItemsProcessed(state.iterations() * p.iterations);
}
BENCHMARK(BM_SimulationRun)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SimulationStep(benchmark::State& state) {
  const SimParams p = scaled_params(state.range(0));
  World world(p, 1);
  for (auto _ : state) {
    world.step();
    benchmark::DoNotOptimize(world.collect_outputs());
  }
}
BENCHMARK(BM_SimulationStep)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_EnergyTest(benchmark::State& state) {
  Rng rng(9);
  const auto draw = [&rng](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        m(i, j) = static_cast<double>(rng.below(1000)) / 1000.0;
    return m;
  };
  const Eigen::MatrixXd x = draw(30, state.range(0));
  const Eigen::MatrixXd y = draw(30, state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy_test(x, y, 1000, seed++));
  }
}
BENCHMARK(BM_EnergyTest)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
