// annpso: train sigmoid networks with particle swarms or backpropagation on
// combine-harvester data and emit comparison reports.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "annpso/error.hpp"
#include "annpso/experiment.hpp"
#include "annpso/text_io.hpp"

namespace fs = std::filesystem;
using namespace annpso;

namespace {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  fs::path out_dir = "annpso_out";
  bool quiet = false;
};

void say(const GlobalOptions& g, const std::string& line) {
  if (!g.quiet) std::cout << line << '\n';
}

void print_table(const GlobalOptions& g, const ExperimentResult& r) {
  if (g.quiet) return;
  std::printf("%-8s %-34s %10s %10s\n", "model", "label", "train", "test");
  for (const auto& m : r.models)
    std::printf("%-8s %-34s %10.6g %10.6g\n", m.id.c_str(), m.label.c_str(), m.train.mean_rmse(),
                m.test.mean_rmse());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ANN / ANN-PSO trainer for combine-harvester performance data", "annpso"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out-dir", g.out_dir, "Directory for output files");
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  // generate
  auto* generate = app.add_subcommand("generate", "Synthesize the 81-row factorial dataset");
  double gen_noise = default_noise_scale;
  std::string gen_output = "dataset.csv";
  generate->add_option("--noise-scale", gen_noise, "Noise scale (>= 0)");
  generate->add_option("--output", gen_output, "File name inside --out-dir");

  // train (a single model)
  auto* train = app.add_subcommand("train", "Train one model and report it");
  std::optional<std::string> train_data;
  std::string train_method = "ANN-PSO";
  std::string train_arch = "3-6-2-3";
  double train_fraction = 0.7;
  double train_noise = default_noise_scale;
  ModelConfig model_cfg;
  train->add_option("--data", train_data, "Dataset file (synthetic when omitted)");
  train->add_option("--method", train_method, "ANN or ANN-PSO");
  train->add_option("--architecture", train_arch, "Layer sizes, e.g. 3-6-2-3");
  train->add_option("--train-fraction", train_fraction);
  train->add_option("--noise-scale", train_noise, "Synthetic noise scale");
  train->add_option("--swarm-size", model_cfg.pso.swarm_size);
  train->add_option("--max-iterations", model_cfg.pso.max_iterations);
  train->add_option("--inertia-weight", model_cfg.pso.inertia_weight);
  train->add_option("--cognitive", model_cfg.pso.cognitive);
  train->add_option("--social", model_cfg.pso.social);
  train->add_option("--velocity-clamp", model_cfg.pso.velocity_clamp);
  train->add_option("--learning-rate", model_cfg.backprop.learning_rate);
  train->add_option("--epochs", model_cfg.backprop.epochs);
  train->add_option("--init-scale", model_cfg.backprop.init_scale);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a full experiment");
  std::optional<std::string> run_config;
  bool paper = false;
  std::optional<std::string> run_data;
  std::size_t repeats = 1;
  auto* config_opt = run_cmd->add_option("--config", run_config, "Experiment config file");
  auto* preset_opt = run_cmd->add_flag("--paper-preset", paper, "Four-model ANN vs ANN-PSO roster");
  config_opt->excludes(preset_opt);
  run_cmd->add_option("--data", run_data, "Dataset file overriding the config source");
  run_cmd->add_option("--repeats", repeats, "Repeat with seeds seed, seed+1, ... and report medians")
      ->check(CLI::PositiveNumber);

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a saved model on a dataset");
  std::string eval_model, eval_data;
  evaluate_cmd->add_option("--model", eval_model, "Model file written by train/run")->required();
  evaluate_cmd->add_option("--data", eval_data, "Dataset file")->required();

  // report
  auto* report_cmd = app.add_subcommand("report", "Re-emit report files from a saved result");
  std::string report_result;
  report_cmd->add_option("--result", report_result, "result.json from a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (generate->parsed()) {
      const std::uint64_t seed = g.seed.value_or(42);
      const auto dataset = synthesize(seed, gen_noise);
      const fs::path path = g.out_dir / gen_output;
      write_dataset(path, dataset);
      say(g, "wrote " + path.string() + " (" + std::to_string(dataset.size()) + " rows)");
    } else if (train->parsed()) {
      ExperimentConfig config;
      config.seed = g.seed.value_or(42);
      config.architecture = NetworkSpec::parse(train_arch);
      config.train_fraction = train_fraction;
      config.dataset.noise_scale = train_noise;
      if (train_data) config.dataset.path = *train_data;
      model_cfg.method = parse_method(train_method);
      model_cfg.label = std::string(to_string(model_cfg.method));
      config.models = {model_cfg};
      const auto result = run(config);
      emit_reports(result, g.out_dir);
      print_table(g, result);
      say(g, "wrote " + (g.out_dir / "model1.model").string());
    } else if (run_cmd->parsed()) {
      if (!run_config && !paper)
        throw Error(ErrorKind::invalid_argument, "run needs --config or --paper-preset");
      ExperimentConfig config = paper ? paper_preset() : load_config(*run_config);
      if (g.seed) config.seed = *g.seed;
      if (run_data) config.dataset.path = *run_data;
      if (repeats == 1) {
        const auto result = run(config);
        emit_reports(result, g.out_dir);
        print_table(g, result);
      } else {
        const auto results = run_repeated(config, repeats);
        emit_repeated(results, g.out_dir);
        if (!g.quiet) {
          std::printf("%-8s %-34s %14s\n", "model", "label", "median test");
          for (const auto& row : median_summary(results))
            std::printf("%-8s %-34s %14.6g\n", row.id.c_str(), row.label.c_str(),
                        row.test_mean_rmse);
        }
      }
      say(g, "reports in " + g.out_dir.string());
    } else if (evaluate_cmd->parsed()) {
      std::ifstream in(eval_model);
      if (!in) throw Error(ErrorKind::io, "cannot open " + eval_model);
      const auto bundle = read_model_bundle(in);
      const auto dataset = ingest(eval_data);
      std::vector<std::size_t> rows(dataset.size());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      const auto ev = evaluate(bundle.model, dataset, rows, bundle.normalization, Stage::test);
      std::ostringstream out;
      out << "output,rmse,r_paper,r_pearson,mae\n";
      for (const auto& o : ev.report.outputs)
        out << o.name << ',' << text::format_double(o.rmse) << ','
            << text::format_double(o.r_paper) << ','
            << (o.r_pearson ? text::format_double(*o.r_pearson) : std::string("NA")) << ','
            << text::format_double(o.mae) << '\n';
      text::write_files_atomically(g.out_dir, {{"evaluation.csv", out.str()}});
      if (!g.quiet) std::cout << out.str();
    } else if (report_cmd->parsed()) {
      const auto result = result_from_json(text::read_file(report_result));
      const auto files = emit_reports(result, g.out_dir);
      say(g, "wrote " + std::to_string(files.size()) + " files to " + g.out_dir.string());
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
