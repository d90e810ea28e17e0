#include "annpso/trainers.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "annpso/error.hpp"
#include "annpso/text_io.hpp"

namespace annpso {

namespace {

constexpr std::uint64_t fnv_offset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t fnv_prime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xffU;
    h *= fnv_prime;
  }
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

TrainObjective::TrainObjective(NetworkSpec spec, std::vector<std::vector<double>> inputs,
                               std::vector<std::vector<double>> targets)
    : spec_(std::move(spec)), inputs_(std::move(inputs)), targets_(std::move(targets)) {
  if (inputs_.empty())
    throw Error(ErrorKind::invalid_argument, "training objective needs at least one sample");
  if (inputs_.size() != targets_.size())
    throw_dimension_mismatch("target rows", inputs_.size(), targets_.size());
  data_hash_ = fnv_offset;
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    if (inputs_[i].size() != spec_.input_size())
      throw Error(ErrorKind::dimension_mismatch,
                  "input row " + std::to_string(i) + ": expected length " +
                      std::to_string(spec_.input_size()) + ", got " +
                      std::to_string(inputs_[i].size()));
    if (targets_[i].size() != spec_.output_size())
      throw Error(ErrorKind::dimension_mismatch,
                  "target row " + std::to_string(i) + ": expected length " +
                      std::to_string(spec_.output_size()) + ", got " +
                      std::to_string(targets_[i].size()));
    for (double x : inputs_[i]) {
      if (!std::isfinite(x))
        throw Error(ErrorKind::invalid_argument,
                    "input row " + std::to_string(i) + " is not finite");
      fnv_mix(data_hash_, std::bit_cast<std::uint64_t>(x));
    }
    for (double t : targets_[i]) {
      if (!(t > 0.0 && t < 1.0))
        throw Error(ErrorKind::invalid_argument,
                    "target row " + std::to_string(i) + " leaves the open interval (0, 1)");
      fnv_mix(data_hash_, std::bit_cast<std::uint64_t>(t));
    }
  }
}

double objective_cost(const TrainObjective& objective, std::span<const double> params) {
  const auto& spec = objective.spec();
  const std::size_t outputs = spec.output_size();
  ForwardScratch scratch(spec);
  std::vector<double> y(outputs);
  std::vector<double> sse(outputs, 0.0);
  for (std::size_t i = 0; i < objective.sample_count(); ++i) {
    forward_into(spec, params, objective.inputs()[i], scratch, y);
    const auto& t = objective.targets()[i];
    for (std::size_t k = 0; k < outputs; ++k) {
      const double e = y[k] - t[k];
      sse[k] += e * e;
    }
  }
  const double n = static_cast<double>(objective.sample_count());
  double total = 0.0;
  for (double s : sse) total += std::sqrt(s / n);
  return total / static_cast<double>(outputs);
}

double objective_cost(const TrainObjective& objective, const ParameterVector& params) {
  if (!(params.spec() == objective.spec()))
    throw Error(ErrorKind::dimension_mismatch,
                "parameters belong to " + params.spec().to_string() + ", objective uses " +
                    objective.spec().to_string());
  return objective_cost(objective, params.values());
}

double mse_loss(const TrainObjective& objective, std::span<const double> params) {
  const auto& spec = objective.spec();
  ForwardScratch scratch(spec);
  std::vector<double> y(spec.output_size());
  double sse = 0.0;
  for (std::size_t i = 0; i < objective.sample_count(); ++i) {
    forward_into(spec, params, objective.inputs()[i], scratch, y);
    for (std::size_t k = 0; k < y.size(); ++k) {
      const double e = y[k] - objective.targets()[i][k];
      sse += e * e;
    }
  }
  return sse / static_cast<double>(objective.sample_count() * spec.output_size());
}

std::vector<double> backprop_gradient(const TrainObjective& objective,
                                      const ParameterVector& params) {
  const auto& spec = objective.spec();
  if (!(params.spec() == spec))
    throw Error(ErrorKind::dimension_mismatch,
                "parameters belong to " + params.spec().to_string() + ", objective uses " +
                    spec.to_string());
  const auto w = params.values();
  const auto& layout = spec.transitions();
  const double scale =
      2.0 / static_cast<double>(objective.sample_count() * spec.output_size());

  std::vector<double> grad(spec.parameter_count(), 0.0);
  std::vector<double> delta(spec.max_width()), prev_delta(spec.max_width());
  for (std::size_t s = 0; s < objective.sample_count(); ++s) {
    const auto trace = forward_with_trace(spec, params, objective.inputs()[s]);
    const auto& y = trace.layers.back();
    const auto& t = objective.targets()[s];
    for (std::size_t k = 0; k < y.size(); ++k)
      delta[k] = scale * (y[k] - t[k]) * y[k] * (1.0 - y[k]);

    for (std::size_t l = layout.size(); l-- > 0;) {
      const auto& tr = layout[l];
      const auto& a_in = trace.layers[l];
      for (std::size_t o = 0; o < tr.outputs; ++o) {
        double* g_row = grad.data() + tr.weight_offset + o * tr.inputs;
        for (std::size_t i = 0; i < tr.inputs; ++i) g_row[i] += delta[o] * a_in[i];
        grad[tr.bias_offset + o] += delta[o];
      }
      if (l == 0) break;
      for (std::size_t i = 0; i < tr.inputs; ++i) {
        double back = 0.0;
        for (std::size_t o = 0; o < tr.outputs; ++o)
          back += w[tr.weight_offset + o * tr.inputs + i] * delta[o];
        prev_delta[i] = back * a_in[i] * (1.0 - a_in[i]);
      }
      std::swap(delta, prev_delta);
    }
  }
  return grad;
}

std::string_view to_string(Method method) noexcept {
  return method == Method::ann ? "ANN" : "ANN-PSO";
}

Method parse_method(std::string_view text) {
  const auto t = text::lower(text::trim(text));
  if (t == "ann") return Method::ann;
  if (t == "ann-pso" || t == "ann_pso") return Method::ann_pso;
  throw Error(ErrorKind::parse, "unknown method '" + std::string(text) + "'");
}

void BackpropConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw Error(ErrorKind::invalid_argument, "backprop config: learning_rate must be > 0");
  if (epochs < 1) throw Error(ErrorKind::invalid_argument, "backprop config: epochs must be >= 1");
  if (!(init_scale > 0.0) || !std::isfinite(init_scale))
    throw Error(ErrorKind::invalid_argument, "backprop config: init_scale must be > 0");
}

std::string fingerprint(std::string_view text) {
  std::uint64_t h = fnv_offset;
  for (unsigned char c : text) {
    h ^= c;
    h *= fnv_prime;
  }
  return hex64(h);
}

std::string describe_config(const TrainObjective& objective, const PsoConfig& config) {
  using text::format_double;
  std::ostringstream s;
  s << "method=ANN-PSO;layers=" << objective.spec().to_string()
    << ";swarm_size=" << config.swarm_size << ";max_iterations=" << config.max_iterations
    << ";inertia_weight=" << format_double(config.inertia_weight)
    << ";cognitive=" << format_double(config.cognitive)
    << ";social=" << format_double(config.social) << ";init=" << format_double(config.init_lo)
    << ',' << format_double(config.init_hi)
    << ";velocity_clamp=" << format_double(config.velocity_clamp) << ";stop_below="
    << (config.stop_below ? format_double(*config.stop_below) : std::string("none"))
    << ";seed=" << config.seed << ";data=" << hex64(objective.data_hash());
  return s.str();
}

std::string describe_config(const TrainObjective& objective, const BackpropConfig& config) {
  using text::format_double;
  std::ostringstream s;
  s << "method=ANN;layers=" << objective.spec().to_string()
    << ";learning_rate=" << format_double(config.learning_rate) << ";epochs=" << config.epochs
    << ";init_scale=" << format_double(config.init_scale) << ";seed=" << config.seed
    << ";data=" << hex64(objective.data_hash());
  return s.str();
}

TrainedModel train_pso(const TrainObjective& objective, const PsoConfig& config,
                       Execution execution) {
  const CostFunction cost = [&objective](std::span<const double> x) {
    return objective_cost(objective, x);
  };
  auto result = optimize(config, objective.spec().parameter_count(), cost, execution);
  std::vector<CurvePoint> curve;
  curve.reserve(result.history.size());
  for (const auto& h : result.history) curve.push_back({h.iteration, h.global_best_cost});
  return TrainedModel{objective.spec(),
                      ParameterVector(objective.spec(), std::move(result.best_position)),
                      std::move(curve), Method::ann_pso,
                      fingerprint(describe_config(objective, config))};
}

TrainedModel train_backprop(const TrainObjective& objective, const BackpropConfig& config) {
  config.validate();
  const auto& spec = objective.spec();
  Rng rng(config.seed);
  std::vector<double> init(spec.parameter_count());
  for (auto& w : init) w = rng.uniform(-config.init_scale, config.init_scale);
  ParameterVector params(spec, std::move(init));

  std::vector<CurvePoint> curve;
  curve.reserve(config.epochs + 1);
  curve.push_back({0, objective_cost(objective, params)});
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto grad = backprop_gradient(objective, params);
    auto values = params.mutable_values();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= config.learning_rate * grad[i];
    const double cost = objective_cost(objective, params);
    bool finite = std::isfinite(cost);
    for (double v : values) finite = finite && std::isfinite(v);
    if (!finite)
      throw Error(ErrorKind::numerical,
                  "backprop diverged at epoch " + std::to_string(epoch) +
                      "; retry with a smaller learning_rate");
    curve.push_back({epoch, cost});
  }
  return TrainedModel{spec, std::move(params), std::move(curve), Method::ann,
                      fingerprint(describe_config(objective, config))};
}

void write_model(std::ostream& out, const TrainedModel& model) {
  out << "annpso-model 1\n";
  out << "method " << to_string(model.method) << '\n';
  out << "fingerprint " << model.config_fingerprint << '\n';
  out << "layers";
  for (auto n : model.spec.layer_sizes()) out << ' ' << n;
  out << "\nparams " << model.params.size() << '\n';
  for (double v : model.params.values()) out << text::format_double(v) << '\n';
  out << "curve " << model.training_curve.size() << '\n';
  for (const auto& e : model.training_curve)
    out << e.step << ' ' << text::format_double(e.cost) << '\n';
  out << "end\n";
}

namespace {

std::string expect_line(std::istream& in, std::string_view keyword) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::parse, "model file: unexpected end, wanted '" + std::string(keyword) + "'");
  const auto t = text::trim(line);
  if (t.substr(0, keyword.size()) != keyword)
    throw Error(ErrorKind::parse, "model file: expected '" + std::string(keyword) + "', got '" +
                                      std::string(t) + "'");
  return std::string(text::trim(t.substr(keyword.size())));
}

std::size_t parse_count(std::string_view token, std::string_view what) {
  const double v = text::parse_double_or_throw(token, what);
  if (v < 0 || v != std::floor(v)) throw Error(ErrorKind::parse, std::string(what) + " is not a count");
  return static_cast<std::size_t>(v);
}

}  // namespace

TrainedModel read_model(std::istream& in) {
  if (expect_line(in, "annpso-model") != "1")
    throw Error(ErrorKind::parse, "model file: unsupported version");
  const Method method = parse_method(expect_line(in, "method"));
  const std::string fp = expect_line(in, "fingerprint");

  std::vector<std::size_t> layers;
  std::istringstream ls(expect_line(in, "layers"));
  std::string tok;
  while (ls >> tok) layers.push_back(parse_count(tok, "layer size"));
  NetworkSpec spec(std::move(layers));

  const std::size_t n = parse_count(expect_line(in, "params"), "params count");
  std::vector<double> values(n);
  std::string line;
  for (auto& v : values) {
    if (!std::getline(in, line)) throw Error(ErrorKind::parse, "model file: truncated parameters");
    v = text::parse_double_or_throw(line, "model parameter");
  }
  ParameterVector params(spec, std::move(values));

  const std::size_t curve_len = parse_count(expect_line(in, "curve"), "curve length");
  std::vector<CurvePoint> curve(curve_len);
  for (auto& e : curve) {
    if (!std::getline(in, line)) throw Error(ErrorKind::parse, "model file: truncated curve");
    const auto parts = text::split(text::trim(line), ' ');
    if (parts.size() != 2) throw Error(ErrorKind::parse, "model file: bad curve line '" + line + "'");
    e.step = parse_count(parts[0], "curve step");
    e.cost = text::parse_double_or_throw(parts[1], "curve cost");
  }
  expect_line(in, "end");
  return TrainedModel{std::move(spec), std::move(params), std::move(curve), method, fp};
}

}  // namespace annpso
