#include "annpso/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "annpso/error.hpp"

namespace annpso {

void PsoConfig::validate() const {
  auto fail = [](const std::string& message) {
    throw Error(ErrorKind::invalid_argument, "pso config: " + message);
  };
  if (swarm_size < 2) fail("swarm_size must be at least 2");
  if (max_iterations < 1) fail("max_iterations must be at least 1");
  if (!(cognitive >= 0.0)) fail("cognitive acceleration must be >= 0");
  if (!(social >= 0.0)) fail("social acceleration must be >= 0");
  if (!std::isfinite(inertia_weight)) fail("inertia_weight must be finite");
  if (!(init_lo < init_hi) || !std::isfinite(init_lo) || !std::isfinite(init_hi))
    fail("position init range needs finite lo < hi");
  if (!(velocity_clamp > 0.0) || !std::isfinite(velocity_clamp))
    fail("velocity_clamp must be positive and finite");
}

TraceSink delimited_trace(std::ostream& out, char delimiter) {
  out << "iteration" << delimiter << "global_best_cost\n";
  return [&out, delimiter](const HistoryEntry& entry) {
    out << entry.iteration << delimiter;
    const auto old = out.precision(17);
    out << entry.global_best_cost << '\n';
    out.precision(old);
  };
}

namespace {

std::vector<std::vector<double>> positions_of(const SwarmState& state) {
  std::vector<std::vector<double>> positions;
  positions.reserve(state.particles.size());
  for (const auto& p : state.particles) positions.push_back(p.position);
  return positions;
}

void record(SwarmState& state) {
  state.cost_history.push_back({state.iteration, state.global_best_cost});
}

}  // namespace

SwarmState initialize_swarm(const PsoConfig& config, std::size_t dimension,
                            const CostFunction& cost, Execution execution) {
  config.validate();
  if (dimension == 0)
    throw Error(ErrorKind::invalid_argument, "pso dimension must be at least 1");

  SwarmState state;
  state.rng = Rng(config.seed);
  state.particles.resize(config.swarm_size);
  for (auto& p : state.particles) {
    p.position.resize(dimension);
    p.velocity.resize(dimension);
    for (auto& x : p.position) x = state.rng.uniform(config.init_lo, config.init_hi);
    for (auto& v : p.velocity) v = state.rng.uniform(-config.velocity_clamp, config.velocity_clamp);
    p.best_position = p.position;
  }

  const auto positions = positions_of(state);
  std::vector<double> costs(positions.size());
  kernels::evaluate_costs(execution, cost, positions, costs);
  state.evaluations += positions.size();

  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (!std::isfinite(costs[i]))
      throw Error(ErrorKind::numerical,
                  "initial cost of particle " + std::to_string(i) + " is not finite");
    state.particles[i].best_cost = costs[i];
  }
  state.global_best_index = 0;
  for (std::size_t i = 1; i < costs.size(); ++i)
    if (costs[i] < costs[state.global_best_index]) state.global_best_index = i;
  state.global_best_cost = costs[state.global_best_index];
  state.global_best_position = state.particles[state.global_best_index].best_position;
  record(state);
  return state;
}

std::vector<double> velocity_update(const Particle& particle, std::span<const double> global_best,
                                    const PsoConfig& config, std::span<const double> r1,
                                    std::span<const double> r2) {
  const std::size_t n = particle.position.size();
  if (particle.velocity.size() != n) throw_dimension_mismatch("velocity", n, particle.velocity.size());
  if (particle.best_position.size() != n)
    throw_dimension_mismatch("personal best", n, particle.best_position.size());
  if (global_best.size() != n) throw_dimension_mismatch("global best", n, global_best.size());
  if (r1.size() != n) throw_dimension_mismatch("r1", n, r1.size());
  if (r2.size() != n) throw_dimension_mismatch("r2", n, r2.size());

  std::vector<double> next(n);
  for (std::size_t d = 0; d < n; ++d) {
    const double x = particle.position[d];
    const double u = config.inertia_weight * particle.velocity[d] +
                     config.cognitive * r1[d] * (particle.best_position[d] - x) +
                     config.social * r2[d] * (global_best[d] - x);
    next[d] = std::clamp(u, -config.velocity_clamp, config.velocity_clamp);
  }
  return next;
}

std::vector<double> position_update(std::span<const double> position,
                                    std::span<const double> velocity) {
  if (velocity.size() != position.size())
    throw_dimension_mismatch("velocity", position.size(), velocity.size());
  std::vector<double> next(position.size());
  for (std::size_t d = 0; d < position.size(); ++d) next[d] = position[d] + velocity[d];
  return next;
}

SwarmState step(SwarmState state, const PsoConfig& config, const CostFunction& cost,
                Execution execution) {
  const std::size_t dimension = state.global_best_position.size();

  // All random draws happen here, in particle order, before any evaluation.
  std::vector<double> r1(dimension), r2(dimension);
  for (auto& p : state.particles) {
    for (auto& r : r1) r = state.rng.uniform01();
    for (auto& r : r2) r = state.rng.uniform01();
    p.velocity = velocity_update(p, state.global_best_position, config, r1, r2);
    p.position = position_update(p.position, p.velocity);
  }

  const auto positions = positions_of(state);
  std::vector<double> costs(positions.size());
  kernels::evaluate_costs(execution, cost, positions, costs);
  state.evaluations += positions.size();

  for (std::size_t i = 0; i < costs.size(); ++i) {
    auto& p = state.particles[i];
    if (!std::isfinite(costs[i])) {
      ++state.nonfinite_evaluations;
      continue;
    }
    if (costs[i] < p.best_cost) {
      p.best_cost = costs[i];
      p.best_position = p.position;
    }
  }
  for (std::size_t i = 0; i < state.particles.size(); ++i) {
    if (state.particles[i].best_cost < state.global_best_cost) {
      state.global_best_cost = state.particles[i].best_cost;
      state.global_best_index = i;
    }
  }
  state.global_best_position = state.particles[state.global_best_index].best_position;
  ++state.iteration;
  record(state);
  return state;
}

PsoResult optimize(const PsoConfig& config, std::size_t dimension, const CostFunction& cost,
                   Execution execution, const TraceSink& trace) {
  SwarmState state = initialize_swarm(config, dimension, cost, execution);
  if (trace) trace(state.cost_history.back());
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    if (config.stop_below && state.global_best_cost < *config.stop_below) break;
    state = step(std::move(state), config, cost, execution);
    if (trace) trace(state.cost_history.back());
  }
  PsoResult result;
  result.best_position = std::move(state.global_best_position);
  result.best_cost = state.global_best_cost;
  result.history = std::move(state.cost_history);
  result.evaluations = state.evaluations;
  result.nonfinite_evaluations = state.nonfinite_evaluations;
  return result;
}

}  // namespace annpso
