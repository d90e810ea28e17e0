#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "annpso/error.hpp"
#include "annpso/experiment.hpp"
#include "annpso/text_io.hpp"
#include "annpso/version.hpp"

namespace annpso {

namespace {

using text::format_double;
using nlohmann::json;

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("NA");
}

const std::vector<std::size_t>& rows_for(const ExperimentResult& r, Stage stage) {
  return stage == Stage::train ? r.split.train : r.split.test;
}

const std::vector<std::vector<double>>& actual_for(const ExperimentResult& r, Stage stage) {
  return stage == Stage::train ? r.train_actual : r.test_actual;
}

const std::vector<std::vector<double>>& predicted_for(const ModelResult& m, Stage stage) {
  return stage == Stage::train ? m.train_predicted : m.test_predicted;
}

std::string render_full_metrics(const ExperimentResult& result) {
  std::ostringstream out;
  out << "model,label,stage,output,rmse,r_paper,r_pearson,mae,r_paper_clamped\n";
  for (const auto& m : result.models)
    for (const auto* report : {&m.train, &m.test})
      for (const auto& o : report->outputs)
        out << m.id << ',' << csv_field(m.label) << ',' << to_string(report->stage) << ','
            << o.name << ',' << format_double(o.rmse) << ',' << format_double(o.r_paper) << ','
            << optional_number(o.r_pearson) << ',' << format_double(o.mae) << ','
            << (o.r_paper_clamped ? 1 : 0) << '\n';
  return out.str();
}

std::string render_scatter(const ExperimentResult& r, const ModelResult& m, Stage stage,
                           std::size_t output) {
  std::ostringstream out;
  out << "sample_index,actual,predicted\n";
  const auto& rows = rows_for(r, stage);
  const auto& actual = actual_for(r, stage);
  const auto& predicted = predicted_for(m, stage);
  for (std::size_t i = 0; i < rows.size(); ++i)
    out << rows[i] << ',' << format_double(actual[i][output]) << ','
        << format_double(predicted[i][output]) << '\n';
  return out.str();
}

std::string render_deviation(const ExperimentResult& r, const ModelResult& m, Stage stage) {
  std::ostringstream out;
  const auto names = output_names();
  out << "sample_index";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  const auto& rows = rows_for(r, stage);
  const auto& actual = actual_for(r, stage);
  const auto& predicted = predicted_for(m, stage);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << rows[i];
    for (std::size_t k = 0; k < names.size(); ++k)
      out << ',' << format_double(predicted[i][k] - actual[i][k]);
    out << '\n';
  }
  return out.str();
}

std::string render_convergence(const ModelResult& m) {
  std::ostringstream out;
  out << "step,cost\n";
  for (const auto& p : m.model.training_curve) out << p.step << ',' << format_double(p.cost) << '\n';
  return out.str();
}

std::string render_manifest(const ExperimentResult& r, const std::vector<std::string>& files) {
  std::ostringstream out;
  out << "tool = annpso\n";
  out << "version = " << version_string << '\n';
  out << "seed = " << r.seed << '\n';
  out << "architecture = " << r.architecture << '\n';
  out << "train_fraction = " << format_double(r.train_fraction) << '\n';
  out << "dataset_source = " << r.dataset_source << '\n';
  out << "provenance = " << to_string(r.provenance) << '\n';
  if (r.synthesis) {
    out << "synthetic_seed = " << r.synthesis->seed << '\n';
    out << "noise_scale = " << format_double(r.synthesis->noise_scale) << '\n';
    out << "surface = " << r.synthesis->surface_version << '\n';
  }
  out << "split_seed = " << r.seeds.split << '\n';
  out << "train_size = " << r.split.train.size() << '\n';
  out << "test_size = " << r.split.test.size() << '\n';
  for (const auto& m : r.models) {
    out << m.id << ".label = " << m.label << '\n';
    out << m.id << ".method = " << to_string(m.model.method) << '\n';
    out << m.id << ".structure = " << m.structure << '\n';
    out << m.id << ".seed = " << m.seed << '\n';
    out << m.id << ".fingerprint = " << m.model.config_fingerprint << '\n';
  }
  for (const auto& f : files) out << "file = " << f << '\n';
  return out.str();
}

json report_to_json(const MetricsReport& report) {
  json outputs = json::array();
  for (const auto& o : report.outputs) {
    outputs.push_back({{"name", o.name},
                       {"rmse", o.rmse},
                       {"r_paper", o.r_paper},
                       {"r_pearson", o.r_pearson ? json(*o.r_pearson) : json(nullptr)},
                       {"mae", o.mae},
                       {"r_paper_clamped", o.r_paper_clamped}});
  }
  return {{"stage", to_string(report.stage)}, {"outputs", outputs}};
}

MetricsReport report_from_json(const json& j) {
  MetricsReport report;
  report.stage = j.at("stage").get<std::string>() == "train" ? Stage::train : Stage::test;
  for (const auto& o : j.at("outputs")) {
    OutputMetrics m;
    m.name = o.at("name").get<std::string>();
    m.rmse = o.at("rmse").get<double>();
    m.r_paper = o.at("r_paper").get<double>();
    if (!o.at("r_pearson").is_null()) m.r_pearson = o.at("r_pearson").get<double>();
    m.mae = o.at("mae").get<double>();
    m.r_paper_clamped = o.at("r_paper_clamped").get<bool>();
    report.outputs.push_back(std::move(m));
  }
  return report;
}

json normalization_to_json(const NormalizationSpec& n) {
  json cols = json::array();
  for (const auto& c : n.columns) cols.push_back({c.min, c.max});
  return {{"columns", cols}, {"target_lo", n.target_lo}, {"target_hi", n.target_hi}};
}

NormalizationSpec normalization_from_json(const json& j) {
  NormalizationSpec n;
  const auto& cols = j.at("columns");
  if (cols.size() != n.columns.size())
    throw Error(ErrorKind::parse, "normalization needs " + std::to_string(n.columns.size()) + " columns");
  for (std::size_t c = 0; c < n.columns.size(); ++c)
    n.columns[c] = {cols[c].at(0).get<double>(), cols[c].at(1).get<double>()};
  n.target_lo = j.at("target_lo").get<double>();
  n.target_hi = j.at("target_hi").get<double>();
  return n;
}

}  // namespace

std::string render_metrics_table(const ExperimentResult& result) {
  const auto names = output_names();
  std::ostringstream out;
  out << "model,method,structure";
  for (const char* stage : {"train", "test"}) {
    for (const auto& n : names) out << ',' << stage << "_rmse_" << n;
    for (const auto& n : names) out << ',' << stage << "_r_" << n;
  }
  out << '\n';
  for (const auto& m : result.models) {
    out << m.id << ',' << to_string(m.model.method) << ',' << csv_field(m.structure);
    for (const auto* report : {&m.train, &m.test}) {
      for (const auto& n : names) out << ',' << format_double(report->at(n).rmse);
      for (const auto& n : names) out << ',' << format_double(report->at(n).r_paper);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::pair<std::string, std::string>> render_reports(const ExperimentResult& result) {
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("metrics_table.csv", render_metrics_table(result));
  files.emplace_back("metrics_full.csv", render_full_metrics(result));
  const auto names = output_names();
  for (const auto& m : result.models) {
    for (Stage stage : {Stage::train, Stage::test}) {
      const std::string split(to_string(stage));
      for (std::size_t k = 0; k < names.size(); ++k)
        files.emplace_back("scatter_" + m.id + "_" + split + "_" + names[k] + ".csv",
                           render_scatter(result, m, stage, k));
      files.emplace_back("deviation_" + m.id + "_" + split + ".csv",
                         render_deviation(result, m, stage));
    }
    files.emplace_back("convergence_" + m.id + ".csv", render_convergence(m));
    std::ostringstream model_text;
    write_model_bundle(model_text, {m.model, result.normalization});
    files.emplace_back(m.id + ".model", model_text.str());
  }
  files.emplace_back("config.ini", result.config_text);
  files.emplace_back("result.json", result_to_json(result));

  std::vector<std::string> listed;
  for (const auto& f : files) listed.push_back(f.first);
  listed.push_back("manifest.txt");
  files.emplace_back("manifest.txt", render_manifest(result, listed));
  return files;
}

std::vector<std::string> emit_reports(const ExperimentResult& result,
                                      const std::filesystem::path& directory) {
  const auto files = render_reports(result);
  text::write_files_atomically(directory, files);
  std::vector<std::string> names;
  for (const auto& f : files) names.push_back(f.first);
  return names;
}

std::vector<std::string> emit_repeated(std::span<const ExperimentResult> results,
                                       const std::filesystem::path& directory) {
  std::vector<std::string> written;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const std::string sub = "repeat_" + std::to_string(k + 1);
    for (const auto& name : emit_reports(results[k], directory / sub))
      written.push_back(sub + "/" + name);
  }
  std::ostringstream out;
  out << "model,label,median_train_mean_rmse,median_test_mean_rmse";
  for (const auto& n : output_names()) out << ",median_test_rmse_" << n;
  out << ",repeats,first_seed\n";
  for (const auto& row : median_summary(results)) {
    out << row.id << ',' << csv_field(row.label) << ',' << format_double(row.train_mean_rmse)
        << ',' << format_double(row.test_mean_rmse);
    for (double v : row.test_rmse) out << ',' << format_double(v);
    out << ',' << results.size() << ',' << results.front().seed << '\n';
  }
  text::write_files_atomically(directory, {{"median_summary.csv", out.str()}});
  written.push_back("median_summary.csv");
  return written;
}

std::string result_to_json(const ExperimentResult& r) {
  json models = json::array();
  for (const auto& m : r.models) {
    json curve = json::array();
    for (const auto& p : m.model.training_curve) curve.push_back({p.step, p.cost});
    models.push_back({{"id", m.id},
                      {"label", m.label},
                      {"structure", m.structure},
                      {"seed", m.seed},
                      {"method", to_string(m.model.method)},
                      {"layers", m.model.spec.layer_sizes()},
                      {"params", std::vector<double>(m.model.params.values().begin(),
                                                     m.model.params.values().end())},
                      {"curve", curve},
                      {"fingerprint", m.model.config_fingerprint},
                      {"train", report_to_json(m.train)},
                      {"test", report_to_json(m.test)},
                      {"train_predicted", m.train_predicted},
                      {"test_predicted", m.test_predicted}});
  }
  json j = {{"format", "annpso-result"},
            {"version", 1},
            {"seed", r.seed},
            {"architecture", r.architecture},
            {"train_fraction", r.train_fraction},
            {"provenance", to_string(r.provenance)},
            {"dataset_source", r.dataset_source},
            {"seeds", {{"dataset", r.seeds.dataset}, {"split", r.seeds.split}, {"models", r.seeds.models}}},
            {"split", {{"train", r.split.train}, {"test", r.split.test}, {"seed", r.split.seed}}},
            {"normalization", normalization_to_json(r.normalization)},
            {"train_actual", r.train_actual},
            {"test_actual", r.test_actual},
            {"models", models},
            {"config_text", r.config_text}};
  if (r.synthesis)
    j["synthesis"] = {{"seed", r.synthesis->seed},
                      {"noise_scale", r.synthesis->noise_scale},
                      {"surface_version", r.synthesis->surface_version}};
  return j.dump(1) + "\n";
}

ExperimentResult result_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "annpso-result")
      throw Error(ErrorKind::parse, "not an annpso result file");
    ExperimentResult r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.architecture = j.at("architecture").get<std::string>();
    r.train_fraction = j.at("train_fraction").get<double>();
    r.provenance = j.at("provenance").get<std::string>() == "synthetic" ? Provenance::synthetic
                                                                        : Provenance::ingested;
    r.dataset_source = j.at("dataset_source").get<std::string>();
    if (j.contains("synthesis")) {
      const auto& s = j.at("synthesis");
      r.synthesis = SynthesisInfo{s.at("seed").get<std::uint64_t>(),
                                  s.at("noise_scale").get<double>(),
                                  s.at("surface_version").get<std::string>()};
    }
    const auto& seeds = j.at("seeds");
    r.seeds.dataset = seeds.at("dataset").get<std::uint64_t>();
    r.seeds.split = seeds.at("split").get<std::uint64_t>();
    r.seeds.models = seeds.at("models").get<std::vector<std::uint64_t>>();
    const auto& sp = j.at("split");
    r.split.train = sp.at("train").get<std::vector<std::size_t>>();
    r.split.test = sp.at("test").get<std::vector<std::size_t>>();
    r.split.seed = sp.at("seed").get<std::uint64_t>();
    r.normalization = normalization_from_json(j.at("normalization"));
    r.train_actual = j.at("train_actual").get<std::vector<std::vector<double>>>();
    r.test_actual = j.at("test_actual").get<std::vector<std::vector<double>>>();
    r.config_text = j.at("config_text").get<std::string>();
    for (const auto& m : j.at("models")) {
      NetworkSpec spec(m.at("layers").get<std::vector<std::size_t>>());
      std::vector<CurvePoint> curve;
      for (const auto& p : m.at("curve"))
        curve.push_back({p.at(0).get<std::size_t>(), p.at(1).get<double>()});
      TrainedModel model{spec, ParameterVector(spec, m.at("params").get<std::vector<double>>()),
                         std::move(curve), parse_method(m.at("method").get<std::string>()),
                         m.at("fingerprint").get<std::string>()};
      r.models.push_back(ModelResult{m.at("id").get<std::string>(),
                                     m.at("label").get<std::string>(),
                                     m.at("structure").get<std::string>(),
                                     m.at("seed").get<std::uint64_t>(),
                                     std::move(model),
                                     report_from_json(m.at("train")),
                                     report_from_json(m.at("test")),
                                     m.at("train_predicted").get<std::vector<std::vector<double>>>(),
                                     m.at("test_predicted").get<std::vector<std::vector<double>>>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("result file: ") + e.what());
  }
}

void write_model_bundle(std::ostream& out, const ModelBundle& bundle) {
  write_model(out, bundle.model);
  const auto& n = bundle.normalization;
  out << "normalization " << format_double(n.target_lo) << ' ' << format_double(n.target_hi)
      << '\n';
  for (std::size_t c = 0; c < n.columns.size(); ++c)
    out << column_names()[c] << ' ' << format_double(n.columns[c].min) << ' '
        << format_double(n.columns[c].max) << '\n';
}

ModelBundle read_model_bundle(std::istream& in) {
  TrainedModel model = read_model(in);
  NormalizationSpec n;
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::parse, "model file has no normalization section");
  auto parts = text::split(text::trim(line), ' ');
  if (parts.size() != 3 || parts[0] != "normalization")
    throw Error(ErrorKind::parse, "model file: expected 'normalization lo hi'");
  n.target_lo = text::parse_double_or_throw(parts[1], "normalization target_lo");
  n.target_hi = text::parse_double_or_throw(parts[2], "normalization target_hi");
  for (std::size_t c = 0; c < n.columns.size(); ++c) {
    if (!std::getline(in, line)) throw Error(ErrorKind::parse, "model file: truncated normalization");
    parts = text::split(text::trim(line), ' ');
    if (parts.size() != 3 || parts[0] != column_names()[c])
      throw Error(ErrorKind::parse, "model file: expected normalization row for " + column_names()[c]);
    n.columns[c].min = text::parse_double_or_throw(parts[1], "normalization min");
    n.columns[c].max = text::parse_double_or_throw(parts[2], "normalization max");
  }
  return {std::move(model), n};
}

}  // namespace annpso
