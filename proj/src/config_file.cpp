#include <charconv>
#include <cmath>
#include <sstream>

#include "annpso/error.hpp"
#include "annpso/experiment.hpp"
#include "annpso/text_io.hpp"

namespace annpso {

namespace {

struct Entry {
  std::size_t line = 0;
  std::string key;
  std::string value;
};

std::string at_line(std::size_t line) { return "config line " + std::to_string(line) + ": "; }

double number(const Entry& e) {
  double v = 0.0;
  if (!text::parse_double(e.value, v) || !std::isfinite(v))
    throw Error(ErrorKind::parse, at_line(e.line) + e.key + " expects a number, got '" + e.value + "'");
  return v;
}

std::uint64_t unsigned_integer(const Entry& e) {
  std::uint64_t v = 0;
  const auto& s = e.value;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::parse,
                at_line(e.line) + e.key + " expects a non-negative integer, got '" + s + "'");
  return v;
}

void apply_model_key(ModelConfig& m, const Entry& e, bool& method_seen) {
  const auto& k = e.key;
  auto require = [&](Method method) {
    if (!method_seen)
      throw Error(ErrorKind::parse, at_line(e.line) + "'method' must come first in a [model] block");
    if (m.method != method)
      throw Error(ErrorKind::parse, at_line(e.line) + "key '" + k + "' does not apply to method " +
                                        std::string(to_string(m.method)));
  };
  if (k == "method") {
    m.method = parse_method(e.value);
    method_seen = true;
  } else if (k == "label") {
    m.label = e.value;
  } else if (k == "seed") {
    m.seed = unsigned_integer(e);
  } else if (k == "swarm_size") {
    require(Method::ann_pso);
    m.pso.swarm_size = unsigned_integer(e);
  } else if (k == "max_iterations") {
    require(Method::ann_pso);
    m.pso.max_iterations = unsigned_integer(e);
  } else if (k == "inertia_weight") {
    require(Method::ann_pso);
    m.pso.inertia_weight = number(e);
  } else if (k == "cognitive") {
    require(Method::ann_pso);
    m.pso.cognitive = number(e);
  } else if (k == "social") {
    require(Method::ann_pso);
    m.pso.social = number(e);
  } else if (k == "init_lo") {
    require(Method::ann_pso);
    m.pso.init_lo = number(e);
  } else if (k == "init_hi") {
    require(Method::ann_pso);
    m.pso.init_hi = number(e);
  } else if (k == "velocity_clamp") {
    require(Method::ann_pso);
    m.pso.velocity_clamp = number(e);
  } else if (k == "stop_below") {
    require(Method::ann_pso);
    m.pso.stop_below = number(e);
  } else if (k == "learning_rate") {
    require(Method::ann);
    m.backprop.learning_rate = number(e);
  } else if (k == "epochs") {
    require(Method::ann);
    m.backprop.epochs = unsigned_integer(e);
  } else if (k == "init_scale") {
    require(Method::ann);
    m.backprop.init_scale = number(e);
  } else {
    throw Error(ErrorKind::parse, at_line(e.line) + "unknown model key '" + k + "'");
  }
}

void apply_global_key(ExperimentConfig& c, const Entry& e) {
  const auto& k = e.key;
  if (k == "seed") {
    c.seed = unsigned_integer(e);
  } else if (k == "architecture") {
    c.architecture = NetworkSpec::parse(e.value);
  } else if (k == "train_fraction") {
    c.train_fraction = number(e);
  } else if (k == "dataset") {
    if (text::lower(e.value) == "synthetic")
      c.dataset.path.reset();
    else
      c.dataset.path = e.value;
  } else if (k == "noise_scale") {
    c.dataset.noise_scale = number(e);
  } else if (k == "synthetic_seed") {
    c.dataset.synthetic_seed = unsigned_integer(e);
  } else {
    throw Error(ErrorKind::parse, at_line(e.line) + "unknown key '" + k + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  config.models.clear();
  ModelConfig* current = nullptr;
  bool method_seen = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto t = text::trim(raw);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      if (t != "[model]")
        throw Error(ErrorKind::parse, at_line(line) + "unknown section '" + std::string(t) + "'");
      if (current && !method_seen)
        throw Error(ErrorKind::parse, at_line(line) + "previous [model] block has no method");
      config.models.emplace_back();
      current = &config.models.back();
      method_seen = false;
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::parse, at_line(line) + "expected 'key = value'");
    Entry e{line, text::lower(text::trim(t.substr(0, eq))),
            std::string(text::trim(t.substr(eq + 1)))};
    if (current)
      apply_model_key(*current, e, method_seen);
    else
      apply_global_key(config, e);
  }
  if (current && !method_seen)
    throw Error(ErrorKind::parse, "config: last [model] block has no method");
  for (std::size_t i = 0; i < config.models.size(); ++i)
    if (config.models[i].label.empty())
      config.models[i].label = std::string(to_string(config.models[i].method)) + " #" +
                               std::to_string(i + 1);
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(text::read_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string format_config(const ExperimentConfig& c) {
  using text::format_double;
  std::ostringstream out;
  out << "seed = " << c.seed << '\n';
  out << "architecture = " << c.architecture.to_string() << '\n';
  out << "train_fraction = " << format_double(c.train_fraction) << '\n';
  out << "dataset = " << (c.dataset.path ? c.dataset.path->generic_string() : "synthetic") << '\n';
  out << "noise_scale = " << format_double(c.dataset.noise_scale) << '\n';
  if (c.dataset.synthetic_seed) out << "synthetic_seed = " << *c.dataset.synthetic_seed << '\n';
  for (const auto& m : c.models) {
    out << "\n[model]\n";
    out << "method = " << to_string(m.method) << '\n';
    out << "label = " << m.label << '\n';
    if (m.seed) out << "seed = " << *m.seed << '\n';
    if (m.method == Method::ann_pso) {
      const auto& p = m.pso;
      out << "swarm_size = " << p.swarm_size << '\n'
          << "max_iterations = " << p.max_iterations << '\n'
          << "inertia_weight = " << format_double(p.inertia_weight) << '\n'
          << "cognitive = " << format_double(p.cognitive) << '\n'
          << "social = " << format_double(p.social) << '\n'
          << "init_lo = " << format_double(p.init_lo) << '\n'
          << "init_hi = " << format_double(p.init_hi) << '\n'
          << "velocity_clamp = " << format_double(p.velocity_clamp) << '\n';
      if (p.stop_below) out << "stop_below = " << format_double(*p.stop_below) << '\n';
    } else {
      const auto& b = m.backprop;
      out << "learning_rate = " << format_double(b.learning_rate) << '\n'
          << "epochs = " << b.epochs << '\n'
          << "init_scale = " << format_double(b.init_scale) << '\n';
    }
  }
  return out.str();
}

}  // namespace annpso
