// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "annpso/kernels.hpp"
#include "annpso/network.hpp"
#include "annpso/random.hpp"
#include "annpso/trainers.hpp"

using namespace annpso;

namespace {

struct BatchFixture {
  NetworkSpec spec{{3, 6, 2, 3}};
  std::vector<double> params;
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> outputs;

  explicit BatchFixture(std::size_t rows) {
    Rng rng(1);
    params.resize(spec.parameter_count());
    for (auto& w : params) w = rng.uniform(-1, 1);
    inputs.assign(rows, std::vector<double>(3));
    for (auto& row : inputs)
      for (auto& x : row) x = rng.uniform(0.1, 0.9);
    outputs.assign(rows, std::vector<double>(3));
  }
};

template <Execution E>
void BM_predict_batch(benchmark::State& state) {
  BatchFixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    kernels::predict_batch(E, f.spec, f.params, f.inputs, f.outputs);
    benchmark::DoNotOptimize(f.outputs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// One swarm evaluation of the 57-row training objective.
template <Execution E>
void BM_evaluate_costs(benchmark::State& state) {
  BatchFixture data(57);
  std::vector<std::vector<double>> targets = data.inputs;
  const TrainObjective obj(data.spec, data.inputs, targets);
  Rng rng(2);
  std::vector<std::vector<double>> positions(static_cast<std::size_t>(state.range(0)),
                                             std::vector<double>(data.spec.parameter_count()));
  for (auto& p : positions)
    for (auto& w : p) w = rng.uniform(-1, 1);
  std::vector<double> costs(positions.size());
  const CostFunction cost = [&](std::span<const double> p) { return objective_cost(obj, p); };
  for (auto _ : state) {
    kernels::evaluate_costs(E, cost, positions, costs);
    benchmark::DoNotOptimize(costs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_predict_batch<Execution::serial>)->Arg(1000)->Arg(100000);
BENCHMARK(BM_predict_batch<Execution::parallel>)->Arg(1000)->Arg(100000);
BENCHMARK(BM_evaluate_costs<Execution::serial>)->Arg(100)->Arg(300);
BENCHMARK(BM_evaluate_costs<Execution::parallel>)->Arg(100)->Arg(300);

BENCHMARK_MAIN();
