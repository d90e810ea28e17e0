#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "annpso/kernels.hpp"

namespace annpso {

enum class Activation { sigmoid };

// Parameter layout of one layer transition inside the flat vector.
struct TransitionLayout {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::size_t weight_offset = 0;  // outputs x inputs, row-major (output-unit-major)
  std::size_t bias_offset = 0;    // outputs entries, directly after the weights
};

// Fully connected feed-forward topology. Units per layer, input layer first;
// sigmoid on every non-input layer.
class NetworkSpec {
public:
  explicit NetworkSpec(std::vector<std::size_t> layer_sizes,
                       Activation activation = Activation::sigmoid);

  // Accepts "3-6-2-3" or "3,6,2,3".
  static NetworkSpec parse(std::string_view text);

  const std::vector<std::size_t>& layer_sizes() const noexcept { return layers_; }
  Activation activation() const noexcept { return activation_; }
  std::size_t input_size() const noexcept { return layers_.front(); }
  std::size_t output_size() const noexcept { return layers_.back(); }
  std::size_t transition_count() const noexcept { return layers_.size() - 1; }
  std::size_t parameter_count() const noexcept { return parameter_count_; }
  std::size_t max_width() const noexcept { return max_width_; }
  const TransitionLayout& transition(std::size_t index) const { return layout_.at(index); }
  const std::vector<TransitionLayout>& transitions() const noexcept { return layout_; }

  // "3-6-2-3"
  std::string to_string() const;

  friend bool operator==(const NetworkSpec& a, const NetworkSpec& b) {
    return a.layers_ == b.layers_ && a.activation_ == b.activation_;
  }

private:
  std::vector<std::size_t> layers_;
  Activation activation_;
  std::vector<TransitionLayout> layout_;
  std::size_t parameter_count_ = 0;
  std::size_t max_width_ = 0;
};

// Sum of n_in * n_out + n_out over consecutive layer pairs. Defined for any
// list, including a single layer (no transitions, zero parameters).
std::size_t parameter_count(std::span<const std::size_t> layer_sizes) noexcept;
inline std::size_t parameter_count(const NetworkSpec& spec) noexcept {
  return spec.parameter_count();
}

// Flat weights and biases for one NetworkSpec.
//
// Layout, for each transition in order: all weights row-major with one row per
// output unit (w[o * inputs + i] connects input i to output o), followed by that
// transition's biases.
class ParameterVector {
public:
  ParameterVector(NetworkSpec spec, std::vector<double> values);

  static ParameterVector zeros(const NetworkSpec& spec);

  const NetworkSpec& spec() const noexcept { return spec_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> mutable_values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const ParameterVector&, const ParameterVector&) = default;

private:
  NetworkSpec spec_;
  std::vector<double> values_;
};

// One transition's parameters as a matrix plus bias vector.
struct LayerParams {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // outputs x inputs, row-major
  std::vector<double> biases;

  double weight(std::size_t out, std::size_t in) const { return weights[out * inputs + in]; }

  friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

std::vector<LayerParams> unflatten(const ParameterVector& params);
ParameterVector flatten(const NetworkSpec& spec, std::span<const LayerParams> layers);

// Outputs of every layer from one forward pass, input echo first.
struct ActivationRecord {
  std::vector<std::vector<double>> layers;
};

// Logistic function. Pre-activations are clamped to [-500, 500] and the result
// is kept strictly inside (0, 1): the upper tail saturates at the largest double
// below 1 instead of rounding to 1.
double sigmoid(double z) noexcept;

// Reusable buffers for the unchecked forward kernel.
class ForwardScratch {
public:
  explicit ForwardScratch(const NetworkSpec& spec)
      : a_(spec.max_width()), b_(spec.max_width()) {}

private:
  friend void forward_into(const NetworkSpec&, std::span<const double>, std::span<const double>,
                           ForwardScratch&, std::span<double>) noexcept;
  std::vector<double> a_;
  std::vector<double> b_;
};

// Hot-path forward pass with no validation. `params` must hold
// spec.parameter_count() values, `input` spec.input_size(), `output`
// spec.output_size().
void forward_into(const NetworkSpec& spec, std::span<const double> params,
                  std::span<const double> input, ForwardScratch& scratch,
                  std::span<double> output) noexcept;

std::vector<double> forward(const NetworkSpec& spec, const ParameterVector& params,
                            std::span<const double> input);

ActivationRecord forward_with_trace(const NetworkSpec& spec, const ParameterVector& params,
                                    std::span<const double> input);

// Row i of the result equals forward(spec, params, inputs[i]). The parallel
// policy produces bit-identical output to the serial one.
std::vector<std::vector<double>> predict_batch(const NetworkSpec& spec,
                                               const ParameterVector& params,
                                               std::span<const std::vector<double>> inputs,
                                               Execution execution = Execution::parallel);

}  // namespace annpso
