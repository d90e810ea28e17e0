#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annpso/network.hpp"
#include "annpso/pso.hpp"

namespace annpso {

// Training-set error as a function of the network parameters. Targets live in
// the normalized (0, 1) domain of the sigmoid outputs.
class TrainObjective {
public:
  TrainObjective(NetworkSpec spec, std::vector<std::vector<double>> inputs,
                 std::vector<std::vector<double>> targets);

  const NetworkSpec& spec() const noexcept { return spec_; }
  const std::vector<std::vector<double>>& inputs() const noexcept { return inputs_; }
  const std::vector<std::vector<double>>& targets() const noexcept { return targets_; }
  std::size_t sample_count() const noexcept { return inputs_.size(); }

  // 64-bit hash of the exact training data bits.
  std::uint64_t data_hash() const noexcept { return data_hash_; }

private:
  NetworkSpec spec_;
  std::vector<std::vector<double>> inputs_;
  std::vector<std::vector<double>> targets_;
  std::uint64_t data_hash_ = 0;
};

// Mean over output units of the per-output RMSE across all samples.
double objective_cost(const TrainObjective& objective, const ParameterVector& params);
// Unchecked variant used as the swarm cost; `params` must have parameter_count values.
double objective_cost(const TrainObjective& objective, std::span<const double> params);

// Mean squared error over all samples and outputs: (1 / (N*K)) * sum (y - t)^2.
// This is the smooth surrogate minimized by backpropagation.
double mse_loss(const TrainObjective& objective, std::span<const double> params);

// Exact gradient of mse_loss by reverse accumulation; sigmoid'(z) = y(1 - y).
std::vector<double> backprop_gradient(const TrainObjective& objective,
                                      const ParameterVector& params);

enum class Method { ann, ann_pso };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view text);

struct BackpropConfig {
  double learning_rate = 0.5;
  std::size_t epochs = 5000;
  double init_scale = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CurvePoint {
  std::size_t step = 0;  // epoch or swarm iteration
  double cost = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct TrainedModel {
  NetworkSpec spec;
  ParameterVector params;
  std::vector<CurvePoint> training_curve;
  Method method = Method::ann;
  std::string config_fingerprint;

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

// 16 hex digits of FNV-1a over `text`.
std::string fingerprint(std::string_view text);

// Canonical description of every hyperparameter, seed, and the data hash.
std::string describe_config(const TrainObjective& objective, const PsoConfig& config);
std::string describe_config(const TrainObjective& objective, const BackpropConfig& config);

// Swarm search over the flat parameter vector; the returned curve is the
// swarm's global-best history.
TrainedModel train_pso(const TrainObjective& objective, const PsoConfig& config,
                       Execution execution = Execution::parallel);

// Full-batch gradient descent on mse_loss from uniform(+-init_scale) weights.
// The curve records objective_cost before the first epoch and after each one.
// Throws Error(numerical) naming the epoch if the loss stops being finite.
TrainedModel train_backprop(const TrainObjective& objective, const BackpropConfig& config);

// Self-describing text format:
//
//   annpso-model 1
//   method ANN-PSO
//   fingerprint 0123456789abcdef
//   layers 3 6 2 3
//   params 47
//   <one value per line, shortest round-trip decimal>
//   curve <count>
//   <iteration> <cost>
//   end
//
// Extra sections written by callers (e.g. normalization) may follow "end".
void write_model(std::ostream& out, const TrainedModel& model);
TrainedModel read_model(std::istream& in);

}  // namespace annpso
