#include "annpso/kernels.hpp"
#include "annpso/network.hpp"

namespace annpso::kernels::serial {

void predict_batch(const NetworkSpec& spec, std::span<const double> params,
                   std::span<const std::vector<double>> inputs,
                   std::span<std::vector<double>> outputs) {
  ForwardScratch scratch(spec);
  for (std::size_t i = 0; i < inputs.size(); ++i)
    forward_into(spec, params, inputs[i], scratch, outputs[i]);
}

void evaluate_costs(const CostFunction& cost, std::span<const std::vector<double>> positions,
                    std::span<double> costs) {
  for (std::size_t i = 0; i < positions.size(); ++i) costs[i] = cost(positions[i]);
}

}  // namespace annpso::kernels::serial
