#include "annpso/experiment.hpp"

#include <algorithm>

#include "annpso/error.hpp"
#include "annpso/random.hpp"

namespace annpso {

std::string ModelConfig::structure(const NetworkSpec& spec) const {
  if (method == Method::ann) return spec.to_string();
  return spec.to_string() + " max_it=" + std::to_string(pso.max_iterations) +
         " swarm=" + std::to_string(pso.swarm_size);
}

void ExperimentConfig::validate() const {
  if (models.empty()) throw Error(ErrorKind::invalid_argument, "experiment has no models");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(ErrorKind::invalid_argument, "train_fraction must lie in (0, 1)");
  if (architecture.input_size() != Sample::input_count ||
      architecture.output_size() != Sample::output_count)
    throw Error(ErrorKind::invalid_argument,
                "architecture " + architecture.to_string() +
                    " must map the 3 machine settings to the 3 responses");
  for (const auto& m : models) {
    try {
      if (m.method == Method::ann_pso)
        m.pso.validate();
      else
        m.backprop.validate();
    } catch (const Error& e) {
      throw Error(e.kind(), "model '" + m.label + "': " + e.what());
    }
  }
}

ExperimentConfig paper_preset() {
  ExperimentConfig config;
  config.architecture = NetworkSpec({3, 6, 2, 3});
  config.train_fraction = 0.7;
  config.seed = 42;

  ModelConfig ann;
  ann.label = "ANN";
  ann.method = Method::ann;
  config.models.push_back(ann);

  const std::pair<std::size_t, std::size_t> roster[] = {{100, 186}, {200, 180}, {300, 221}};
  for (auto [swarm, iterations] : roster) {
    ModelConfig m;
    m.method = Method::ann_pso;
    m.pso.swarm_size = swarm;
    m.pso.max_iterations = iterations;
    m.label = "ANN-PSO swarm=" + std::to_string(swarm) + " max_it=" + std::to_string(iterations);
    config.models.push_back(m);
  }
  return config;
}

SeedPlan plan_seeds(const ExperimentConfig& config) {
  SeedPlan plan;
  plan.dataset = config.dataset.synthetic_seed.value_or(derive_seed(config.seed, 0));
  plan.split = derive_seed(config.seed, 1);
  for (std::size_t i = 0; i < config.models.size(); ++i)
    plan.models.push_back(config.models[i].seed.value_or(derive_seed(config.seed, 100 + i)));
  return plan;
}

Evaluation evaluate(const TrainedModel& model, const Dataset& dataset,
                    std::span<const std::size_t> rows, const NormalizationSpec& normalization,
                    Stage stage) {
  if (rows.empty()) throw Error(ErrorKind::invalid_argument, "cannot evaluate on an empty split");
  std::vector<std::vector<double>> inputs;
  Evaluation out;
  for (auto r : rows) {
    const auto& s = dataset.samples.at(r);
    inputs.push_back(normalization.normalized_inputs(s));
    out.actual.push_back({s.bs_broken_seeds, s.pl_product_loss, s.mog_material_other_than_grain});
  }
  const auto raw = predict_batch(model.spec, model.params, inputs);
  out.predicted.reserve(raw.size());
  for (const auto& y : raw) out.predicted.push_back(normalization.denormalize_targets(y));
  const auto names = output_names();
  out.report = compute_report(stage, names, out.actual, out.predicted);
  return out;
}

ExperimentResult run(const ExperimentConfig& config, Execution execution) {
  config.validate();
  const auto seeds = plan_seeds(config);
  if (config.dataset.path) return run(config, ingest(*config.dataset.path), execution);
  return run(config, synthesize(seeds.dataset, config.dataset.noise_scale), execution);
}

ExperimentResult run(const ExperimentConfig& config, const Dataset& dataset,
                     Execution execution) {
  config.validate();
  ExperimentResult result;
  result.seed = config.seed;
  result.architecture = config.architecture.to_string();
  result.train_fraction = config.train_fraction;
  result.provenance = dataset.provenance;
  result.synthesis = dataset.synthesis;
  result.dataset_source =
      config.dataset.path ? config.dataset.path->generic_string() : std::string("synthetic");
  result.seeds = plan_seeds(config);
  result.config_text = format_config(config);

  result.split = split(dataset, config.train_fraction, result.seeds.split);
  result.normalization = fit_normalization(dataset, result.split.train);

  std::vector<std::vector<double>> inputs, targets;
  for (auto r : result.split.train) {
    inputs.push_back(result.normalization.normalized_inputs(dataset.samples[r]));
    targets.push_back(result.normalization.normalized_targets(dataset.samples[r]));
  }
  const TrainObjective objective(config.architecture, std::move(inputs), std::move(targets));

  for (std::size_t i = 0; i < config.models.size(); ++i) {
    const auto& mc = config.models[i];
    try {
      const std::uint64_t seed = result.seeds.models[i];
      auto trained = [&] {
        if (mc.method == Method::ann_pso) {
          PsoConfig pso = mc.pso;
          pso.seed = seed;
          return train_pso(objective, pso, execution);
        }
        BackpropConfig bp = mc.backprop;
        bp.seed = seed;
        return train_backprop(objective, bp);
      }();
      ModelResult mr{"model" + std::to_string(i + 1),
                     mc.label,
                     mc.structure(config.architecture),
                     seed,
                     std::move(trained),
                     {},
                     {},
                     {},
                     {}};
      auto train_eval =
          evaluate(mr.model, dataset, result.split.train, result.normalization, Stage::train);
      auto test_eval =
          evaluate(mr.model, dataset, result.split.test, result.normalization, Stage::test);
      mr.train = std::move(train_eval.report);
      mr.test = std::move(test_eval.report);
      mr.train_predicted = std::move(train_eval.predicted);
      mr.test_predicted = std::move(test_eval.predicted);
      if (i == 0) {
        result.train_actual = std::move(train_eval.actual);
        result.test_actual = std::move(test_eval.actual);
      }
      result.models.push_back(std::move(mr));
    } catch (const Error& e) {
      throw Error(e.kind(), "model '" + mc.label + "': " + e.what());
    }
  }
  return result;
}

std::vector<ExperimentResult> run_repeated(const ExperimentConfig& config, std::size_t repeats,
                                           Execution execution) {
  if (repeats < 1) throw Error(ErrorKind::invalid_argument, "repeats must be at least 1");
  std::vector<ExperimentResult> results;
  for (std::size_t k = 0; k < repeats; ++k) {
    ExperimentConfig c = config;
    c.seed = config.seed + k;
    results.push_back(run(c, execution));
  }
  return results;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<MedianSummaryRow> median_summary(std::span<const ExperimentResult> results) {
  std::vector<MedianSummaryRow> rows;
  if (results.empty()) return rows;
  const std::size_t models = results.front().models.size();
  for (std::size_t m = 0; m < models; ++m) {
    MedianSummaryRow row;
    row.id = results.front().models[m].id;
    row.label = results.front().models[m].label;
    std::vector<double> train, test;
    const std::size_t outputs = results.front().models[m].test.outputs.size();
    std::vector<std::vector<double>> per_output(outputs);
    for (const auto& r : results) {
      const auto& mr = r.models.at(m);
      train.push_back(mr.train.mean_rmse());
      test.push_back(mr.test.mean_rmse());
      for (std::size_t k = 0; k < outputs; ++k) per_output[k].push_back(mr.test.outputs[k].rmse);
    }
    row.train_mean_rmse = median(train);
    row.test_mean_rmse = median(test);
    for (auto& v : per_output) row.test_rmse.push_back(median(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace annpso
