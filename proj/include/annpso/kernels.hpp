#pragma once

// Data-parallel inner loops. Each kernel has a serial reference version and an
// OpenMP version; both write every result into its own slot, so the two agree
// bit for bit regardless of thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace annpso {

class NetworkSpec;

enum class Execution { serial, parallel };

// Objective minimized by the swarm. Must be safe to call concurrently.
using CostFunction = std::function<double(std::span<const double>)>;

namespace kernels {

namespace serial {

// outputs[i] = network(params, inputs[i]); outputs must already be sized.
void predict_batch(const NetworkSpec& spec, std::span<const double> params,
                   std::span<const std::vector<double>> inputs,
                   std::span<std::vector<double>> outputs);

// costs[i] = cost(positions[i])
void evaluate_costs(const CostFunction& cost, std::span<const std::vector<double>> positions,
                    std::span<double> costs);

}  // namespace serial

namespace omp {

void predict_batch(const NetworkSpec& spec, std::span<const double> params,
                   std::span<const std::vector<double>> inputs,
                   std::span<std::vector<double>> outputs);

void evaluate_costs(const CostFunction& cost, std::span<const std::vector<double>> positions,
                    std::span<double> costs);

}  // namespace omp

inline void predict_batch(Execution execution, const NetworkSpec& spec,
                          std::span<const double> params,
                          std::span<const std::vector<double>> inputs,
                          std::span<std::vector<double>> outputs) {
  if (execution == Execution::parallel)
    omp::predict_batch(spec, params, inputs, outputs);
  else
    serial::predict_batch(spec, params, inputs, outputs);
}

inline void evaluate_costs(Execution execution, const CostFunction& cost,
                           std::span<const std::vector<double>> positions,
                           std::span<double> costs) {
  if (execution == Execution::parallel)
    omp::evaluate_costs(cost, positions, costs);
  else
    serial::evaluate_costs(cost, positions, costs);
}

// Number of threads the OpenMP kernels will use (1 when built without OpenMP).
int available_threads() noexcept;

}  // namespace kernels
}  // namespace annpso
