#include "annpso/kernels.hpp"
#include "annpso/network.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace annpso::kernels {

namespace omp {

void predict_batch(const NetworkSpec& spec, std::span<const double> params,
                   std::span<const std::vector<double>> inputs,
                   std::span<std::vector<double>> outputs) {
  const auto rows = static_cast<std::ptrdiff_t>(inputs.size());
#pragma omp parallel
  {
    ForwardScratch scratch(spec);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i)
      forward_into(spec, params, inputs[i], scratch, outputs[i]);
  }
}

void evaluate_costs(const CostFunction& cost, std::span<const std::vector<double>> positions,
                    std::span<double> costs) {
  const auto count = static_cast<std::ptrdiff_t>(positions.size());
  // Exceptions may not cross the parallel region; the first one is rethrown.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      costs[i] = cost(positions[i]);
    } catch (...) {
#pragma omp critical(annpso_cost_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace omp

int available_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace annpso::kernels
