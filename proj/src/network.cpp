#include "annpso/network.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <limits>

#include "annpso/error.hpp"

namespace annpso {

NetworkSpec::NetworkSpec(std::vector<std::size_t> layer_sizes, Activation activation)
    : layers_(std::move(layer_sizes)), activation_(activation) {
  if (layers_.size() < 2)
    throw Error(ErrorKind::invalid_argument,
                "network needs at least an input and an output layer, got " +
                    std::to_string(layers_.size()) + " layer(s)");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i] == 0)
      throw Error(ErrorKind::invalid_argument,
                  "layer " + std::to_string(i) + " has zero units");
    max_width_ = std::max(max_width_, layers_[i]);
  }
  std::size_t offset = 0;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
    TransitionLayout t;
    t.inputs = layers_[i];
    t.outputs = layers_[i + 1];
    t.weight_offset = offset;
    t.bias_offset = offset + t.inputs * t.outputs;
    offset = t.bias_offset + t.outputs;
    layout_.push_back(t);
  }
  parameter_count_ = offset;
}

NetworkSpec NetworkSpec::parse(std::string_view text) {
  std::vector<std::size_t> sizes;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find_first_of("-,", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view token = text.substr(pos, end - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
      throw Error(ErrorKind::parse, "bad architecture '" + std::string(text) + "'");
    sizes.push_back(value);
    pos = end + 1;
  }
  return NetworkSpec(std::move(sizes));
}

std::string NetworkSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(layers_[i]);
  }
  return out;
}

std::size_t parameter_count(std::span<const std::size_t> layer_sizes) noexcept {
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i)
    count += layer_sizes[i] * layer_sizes[i + 1] + layer_sizes[i + 1];
  return count;
}

ParameterVector::ParameterVector(NetworkSpec spec, std::vector<double> values)
    : spec_(std::move(spec)), values_(std::move(values)) {
  if (values_.size() != spec_.parameter_count())
    throw_dimension_mismatch("parameter vector for " + spec_.to_string(),
                             spec_.parameter_count(), values_.size());
}

ParameterVector ParameterVector::zeros(const NetworkSpec& spec) {
  return ParameterVector(spec, std::vector<double>(spec.parameter_count(), 0.0));
}

std::vector<LayerParams> unflatten(const ParameterVector& params) {
  std::vector<LayerParams> layers;
  const auto values = params.values();
  for (const auto& t : params.spec().transitions()) {
    LayerParams layer;
    layer.inputs = t.inputs;
    layer.outputs = t.outputs;
    layer.weights.assign(values.begin() + t.weight_offset, values.begin() + t.bias_offset);
    layer.biases.assign(values.begin() + t.bias_offset,
                        values.begin() + t.bias_offset + t.outputs);
    layers.push_back(std::move(layer));
  }
  return layers;
}

ParameterVector flatten(const NetworkSpec& spec, std::span<const LayerParams> layers) {
  if (layers.size() != spec.transition_count())
    throw_dimension_mismatch("layer list", spec.transition_count(), layers.size());
  std::vector<double> values;
  values.reserve(spec.parameter_count());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& t = spec.transition(i);
    const auto& layer = layers[i];
    if (layer.inputs != t.inputs || layer.outputs != t.outputs ||
        layer.weights.size() != t.inputs * t.outputs || layer.biases.size() != t.outputs)
      throw Error(ErrorKind::dimension_mismatch,
                  "layer " + std::to_string(i) + " does not match " + spec.to_string());
    values.insert(values.end(), layer.weights.begin(), layer.weights.end());
    values.insert(values.end(), layer.biases.begin(), layer.biases.end());
  }
  return ParameterVector(spec, std::move(values));
}

double sigmoid(double z) noexcept {
  constexpr double below_one = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  z = std::clamp(z, -500.0, 500.0);
  if (z >= 0.0) return std::min(1.0 / (1.0 + std::exp(-z)), below_one);
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// y = sigmoid(W x + b) for one transition.
inline void apply_transition(const TransitionLayout& t, const double* params, const double* in,
                             double* out) noexcept {
  const double* w = params + t.weight_offset;
  const double* b = params + t.bias_offset;
  for (std::size_t o = 0; o < t.outputs; ++o) {
    double z = b[o];
    const double* row = w + o * t.inputs;
    for (std::size_t i = 0; i < t.inputs; ++i) z += row[i] * in[i];
    out[o] = sigmoid(z);
  }
}

void check_arguments(const NetworkSpec& spec, const ParameterVector& params,
                     std::size_t input_size) {
  if (!(params.spec() == spec))
    throw Error(ErrorKind::dimension_mismatch,
                "parameters belong to " + params.spec().to_string() + ", not " +
                    spec.to_string());
  if (input_size != spec.input_size())
    throw_dimension_mismatch("network input", spec.input_size(), input_size);
}

}  // namespace

void forward_into(const NetworkSpec& spec, std::span<const double> params,
                  std::span<const double> input, ForwardScratch& scratch,
                  std::span<double> output) noexcept {
  const auto& layout = spec.transitions();
  const double* in = input.data();
  double* bufs[2] = {scratch.a_.data(), scratch.b_.data()};
  for (std::size_t l = 0; l < layout.size(); ++l) {
    double* out = (l + 1 == layout.size()) ? output.data() : bufs[l % 2];
    apply_transition(layout[l], params.data(), in, out);
    in = out;
  }
}

std::vector<double> forward(const NetworkSpec& spec, const ParameterVector& params,
                            std::span<const double> input) {
  check_arguments(spec, params, input.size());
  ForwardScratch scratch(spec);
  std::vector<double> out(spec.output_size());
  forward_into(spec, params.values(), input, scratch, out);
  return out;
}

ActivationRecord forward_with_trace(const NetworkSpec& spec, const ParameterVector& params,
                                    std::span<const double> input) {
  check_arguments(spec, params, input.size());
  ActivationRecord record;
  record.layers.reserve(spec.layer_sizes().size());
  record.layers.emplace_back(input.begin(), input.end());
  for (const auto& t : spec.transitions()) {
    std::vector<double> out(t.outputs);
    apply_transition(t, params.values().data(), record.layers.back().data(), out.data());
    record.layers.push_back(std::move(out));
  }
  return record;
}

std::vector<std::vector<double>> predict_batch(const NetworkSpec& spec,
                                               const ParameterVector& params,
                                               std::span<const std::vector<double>> inputs,
                                               Execution execution) {
  check_arguments(spec, params, spec.input_size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != spec.input_size())
      throw Error(ErrorKind::dimension_mismatch,
                  "row " + std::to_string(i) + ": expected length " +
                      std::to_string(spec.input_size()) + ", got " +
                      std::to_string(inputs[i].size()));
  }
  std::vector<std::vector<double>> outputs(inputs.size(),
                                           std::vector<double>(spec.output_size()));
  kernels::predict_batch(execution, spec, params.values(), inputs, outputs);
  return outputs;
}

}  // namespace annpso
