#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annpso/dataset.hpp"
#include "annpso/metrics.hpp"
#include "annpso/network.hpp"
#include "annpso/pso.hpp"
#include "annpso/trainers.hpp"

namespace annpso {

struct DatasetSource {
  std::optional<std::filesystem::path> path;  // absent: synthesize
  double noise_scale = default_noise_scale;
  std::optional<std::uint64_t> synthetic_seed;  // absent: derived from the run seed

  friend bool operator==(const DatasetSource&, const DatasetSource&) = default;
};

struct ModelConfig {
  std::string label;
  Method method = Method::ann_pso;
  PsoConfig pso;            // used when method == ann_pso
  BackpropConfig backprop;  // used when method == ann
  std::optional<std::uint64_t> seed;  // absent: derived from the run seed and model index

  // e.g. "3-6-2-3" for ANN, "3-6-2-3 max_it=221 swarm=300" for ANN-PSO
  std::string structure(const NetworkSpec& spec) const;
};

struct ExperimentConfig {
  DatasetSource dataset;
  NetworkSpec architecture{{3, 6, 2, 3}};
  double train_fraction = 0.7;
  std::uint64_t seed = 42;
  std::vector<ModelConfig> models;

  void validate() const;
};

// Four models: ANN baseline and ANN-PSO at (swarm, iterations) = (100, 186),
// (200, 180), (300, 221); 3-6-2-3 network; 70/30 split; synthetic data.
ExperimentConfig paper_preset();

// Seed streams derived from the run seed.
struct SeedPlan {
  std::uint64_t dataset = 0;
  std::uint64_t split = 0;
  std::vector<std::uint64_t> models;
};
SeedPlan plan_seeds(const ExperimentConfig& config);

// Predictions of one model on one split, in original units.
struct Evaluation {
  MetricsReport report;
  std::vector<std::vector<double>> actual;
  std::vector<std::vector<double>> predicted;
};

// Runs the model on the selected rows, denormalizes its outputs and computes
// per-output metrics against the original-unit targets.
Evaluation evaluate(const TrainedModel& model, const Dataset& dataset,
                    std::span<const std::size_t> rows, const NormalizationSpec& normalization,
                    Stage stage);

struct ModelResult {
  std::string id;  // model1, model2, ...
  std::string label;
  std::string structure;
  std::uint64_t seed = 0;
  TrainedModel model;
  MetricsReport train;
  MetricsReport test;
  std::vector<std::vector<double>> train_predicted;
  std::vector<std::vector<double>> test_predicted;
};

struct ExperimentResult {
  std::uint64_t seed = 0;
  std::string architecture;
  double train_fraction = 0.0;
  Provenance provenance = Provenance::synthetic;
  std::string dataset_source;
  std::optional<SynthesisInfo> synthesis;
  SeedPlan seeds;
  SplitIndices split;
  NormalizationSpec normalization;
  std::vector<std::vector<double>> train_actual;  // original units, split order
  std::vector<std::vector<double>> test_actual;
  std::vector<ModelResult> models;
  std::string config_text;  // re-runnable config file contents
};

// Trains every model on one shared split and evaluates it on both sides.
// Throws (naming the model label) on any failure; nothing is partially returned.
ExperimentResult run(const ExperimentConfig& config, Execution execution = Execution::parallel);
ExperimentResult run(const ExperimentConfig& config, const Dataset& dataset,
                     Execution execution = Execution::parallel);

// Repeats the run with seeds config.seed, config.seed + 1, ...
std::vector<ExperimentResult> run_repeated(const ExperimentConfig& config, std::size_t repeats,
                                           Execution execution = Execution::parallel);

struct MedianSummaryRow {
  std::string id;
  std::string label;
  double train_mean_rmse = 0.0;
  double test_mean_rmse = 0.0;
  std::vector<double> test_rmse;  // per output
};
std::vector<MedianSummaryRow> median_summary(std::span<const ExperimentResult> results);

// File contents keyed by name; emit_reports writes them atomically.
std::vector<std::pair<std::string, std::string>> render_reports(const ExperimentResult& result);
std::vector<std::string> emit_reports(const ExperimentResult& result,
                                      const std::filesystem::path& directory);
std::vector<std::string> emit_repeated(std::span<const ExperimentResult> results,
                                       const std::filesystem::path& directory);

// Metrics table: model, method, structure, then RMSE and correlation
// (r_paper) per output for the training stage followed by the test stage.
std::string render_metrics_table(const ExperimentResult& result);

// Config file: "key = value" lines, '#' comments, one "[model]" section per model.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string format_config(const ExperimentConfig& config);

// Whole-result JSON used by the `report` subcommand.
std::string result_to_json(const ExperimentResult& result);
ExperimentResult result_from_json(std::string_view json);

// Model file plus the normalization needed to map outputs back to original units.
struct ModelBundle {
  TrainedModel model;
  NormalizationSpec normalization;
};
void write_model_bundle(std::ostream& out, const ModelBundle& bundle);
ModelBundle read_model_bundle(std::istream& in);

}  // namespace annpso
