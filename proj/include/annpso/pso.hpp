#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "annpso/kernels.hpp"
#include "annpso/random.hpp"

namespace annpso {

// Global-best particle swarm settings. Defaults are the usual
// constriction-equivalent inertia/acceleration values and a modest search box
// suited to sigmoid-network weights.
struct PsoConfig {
  std::size_t swarm_size = 30;
  std::size_t max_iterations = 100;
  double inertia_weight = 0.729;
  double cognitive = 1.49445;  // A1, pull towards the particle's own best
  double social = 1.49445;     // A2, pull towards the swarm best
  double init_lo = -1.0;
  double init_hi = 1.0;
  double velocity_clamp = 0.5;
  std::uint64_t seed = 0;
  // Early stop once the global best falls below this cost. Off by default.
  std::optional<double> stop_below;

  // Throws Error(invalid_argument) naming the first violated constraint.
  void validate() const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_cost = 0.0;

  friend bool operator==(const Particle&, const Particle&) = default;
};

struct HistoryEntry {
  std::size_t iteration = 0;
  double global_best_cost = 0.0;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct SwarmState {
  std::vector<Particle> particles;
  std::vector<double> global_best_position;
  double global_best_cost = 0.0;
  std::size_t global_best_index = 0;
  std::size_t iteration = 0;
  std::vector<HistoryEntry> cost_history;
  std::size_t evaluations = 0;
  // Evaluations that returned NaN/inf and were treated as +infinity.
  std::size_t nonfinite_evaluations = 0;
  Rng rng{0};

  friend bool operator==(const SwarmState&, const SwarmState&) = default;
};

// Called once per recorded history entry (initialization, then every step).
using TraceSink = std::function<void(const HistoryEntry&)>;

// Writes "iteration<delim>global_best_cost" records, header first.
TraceSink delimited_trace(std::ostream& out, char delimiter = ',');

SwarmState initialize_swarm(const PsoConfig& config, std::size_t dimension,
                            const CostFunction& cost,
                            Execution execution = Execution::parallel);

// u' = IW*u + A1*r1*(pbest - x) + A2*r2*(gbest - x), component-wise, then
// clamped to [-velocity_clamp, velocity_clamp].
std::vector<double> velocity_update(const Particle& particle, std::span<const double> global_best,
                                    const PsoConfig& config, std::span<const double> r1,
                                    std::span<const double> r2);

std::vector<double> position_update(std::span<const double> position,
                                    std::span<const double> velocity);

// One iteration: draw r1/r2 for every particle, move the swarm, evaluate all
// particles, then refresh personal and global bests (strict improvement only).
SwarmState step(SwarmState state, const PsoConfig& config, const CostFunction& cost,
                Execution execution = Execution::parallel);

struct PsoResult {
  std::vector<double> best_position;
  double best_cost = 0.0;
  std::vector<HistoryEntry> history;
  std::size_t evaluations = 0;
  std::size_t nonfinite_evaluations = 0;
};

PsoResult optimize(const PsoConfig& config, std::size_t dimension, const CostFunction& cost,
                   Execution execution = Execution::parallel, const TraceSink& trace = {});

}  // namespace annpso
