#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "annpso/error.hpp"
#include "annpso/experiment.hpp"
#include "annpso/text_io.hpp"

using namespace annpso;
using annpso::text::parse_double_or_throw;
using annpso::text::read_file;
using annpso::text::write_files_atomically;

namespace {

// Same roster shape as the preset with budgets small enough for unit tests.
ExperimentConfig small_config(std::uint64_t seed = 7) {
  ExperimentConfig c = paper_preset();
  c.seed = seed;
  c.models[0].backprop.epochs = 200;
  for (std::size_t i = 1; i < c.models.size(); ++i) {
    c.models[i].pso.swarm_size = 10 + 5 * i;
    c.models[i].pso.max_iterations = 15;
  }
  return c;
}

std::string find_file(const std::vector<std::pair<std::string, std::string>>& files,
                      const std::string& name) {
  for (const auto& [n, contents] : files)
    if (n == name) return contents;
  FAIL("missing report " << name);
  return {};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) {
      std::vector<std::string> cells;
      for (auto cell : text::split(line, ',')) cells.emplace_back(cell);
      rows.push_back(std::move(cells));
    }
  return rows;
}

}  // namespace

TEST_CASE("paper preset") {
  const auto c = paper_preset();
  CHECK_NOTHROW(c.validate());
  CHECK(c.architecture.parameter_count() == 47);
  CHECK(c.train_fraction == 0.7);
  REQUIRE(c.models.size() == 4);
  CHECK(c.models[0].method == Method::ann);
  const std::pair<std::size_t, std::size_t> budgets[] = {{100, 186}, {200, 180}, {300, 221}};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(c.models[i + 1].method == Method::ann_pso);
    CHECK(c.models[i + 1].pso.swarm_size == budgets[i].first);
    CHECK(c.models[i + 1].pso.max_iterations == budgets[i].second);
  }
  CHECK(c.models[3].structure(c.architecture) == "3-6-2-3 max_it=221 swarm=300");
  CHECK(c.models[0].structure(c.architecture) == "3-6-2-3");
}

TEST_CASE("config text round trip") {
  auto c = small_config();
  c.models[2].pso.stop_below = 1e-5;
  c.models[1].seed = 99;
  c.dataset.synthetic_seed = 3;
  const auto back = parse_config(format_config(c));
  CHECK(format_config(back) == format_config(c));
  CHECK(back.models[2].pso.stop_below == 1e-5);
  CHECK(back.models[1].seed == 99u);

  CHECK_THROWS_AS(parse_config("seed = 1\nbogus = 2\n"), Error);
  CHECK_THROWS_AS(parse_config("[model]\nmethod = ANN\nswarm_size = 10\n"), Error);
  CHECK_THROWS_AS(parse_config("[model]\nswarm_size = 10\n"), Error);
  CHECK_THROWS_AS(parse_config("seed = x\n"), Error);
}

TEST_CASE("seed plan") {
  auto c = small_config(42);
  const auto a = plan_seeds(c);
  CHECK(a.models.size() == 4);
  CHECK(a.dataset != a.split);
  c.models[2].seed = 5;
  const auto b = plan_seeds(c);
  CHECK(b.models[2] == 5);
  CHECK(b.models[1] == a.models[1]);
}

TEST_CASE("run is deterministic and reports are byte-identical") {
  const auto c = small_config();
  const auto a = run(c);
  const auto b = run(c);
  CHECK(render_reports(a) == render_reports(b));
  CHECK(render_reports(run(c, Execution::serial)) == render_reports(a));
  CHECK(render_reports(run(small_config(8))) != render_reports(a));
}

TEST_CASE("report contents") {
  const auto r = run(small_config());
  CHECK(r.split.train.size() == 57);
  CHECK(r.split.test.size() == 24);
  const auto files = render_reports(r);

  const auto table = csv_rows(find_file(files, "metrics_table.csv"));
  REQUIRE(table.size() == 5);
  CHECK(table[0][0] == "model");
  CHECK(table[0].size() == 15);
  for (std::size_t m = 0; m < 4; ++m) {
    const auto& row = table[m + 1];
    const auto& result = r.models[m];
    CHECK(row[1] == to_string(result.model.method));
    const char* outputs[] = {"BS", "PL", "MOG"};
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(parse_double_or_throw(row[3 + k], "cell") == result.train.at(outputs[k]).rmse);
      CHECK(parse_double_or_throw(row[6 + k], "cell") == result.train.at(outputs[k]).r_paper);
      CHECK(parse_double_or_throw(row[9 + k], "cell") == result.test.at(outputs[k]).rmse);
      CHECK(parse_double_or_throw(row[12 + k], "cell") == result.test.at(outputs[k]).r_paper);
    }
  }

  const auto scatter = csv_rows(find_file(files, "scatter_model2_test_PL.csv"));
  REQUIRE(scatter.size() == 25);
  CHECK(scatter[0] == std::vector<std::string>{"sample_index", "actual", "predicted"});
  for (std::size_t i = 0; i < 24; ++i) {
    CHECK(parse_double_or_throw(scatter[i + 1][1], "a") == r.test_actual[i][1]);
    CHECK(parse_double_or_throw(scatter[i + 1][2], "p") == r.models[1].test_predicted[i][1]);
  }

  const auto deviation = csv_rows(find_file(files, "deviation_model3_train.csv"));
  REQUIRE(deviation.size() == 58);
  const auto header = deviation[0];
  for (std::size_t i = 0; i < 57; ++i)
    for (std::size_t k = 0; k < 3; ++k) {
      const std::string name = output_names()[k];
      std::size_t col = 0;
      while (col < header.size() && header[col] != name) ++col;
      REQUIRE(col < header.size());
      CHECK(parse_double_or_throw(deviation[i + 1][col], "d") ==
            r.models[2].train_predicted[i][k] - r.train_actual[i][k]);
    }

  const auto convergence = csv_rows(find_file(files, "convergence_model4.csv"));
  CHECK(convergence.size() == 1 + 16);
}

TEST_CASE("result JSON round trip reproduces the reports") {
  const auto r = run(small_config(11));
  const auto back = result_from_json(result_to_json(r));
  CHECK(render_reports(back) == render_reports(r));
  CHECK_THROWS_AS(result_from_json("{"), Error);
}

TEST_CASE("model bundle round trip") {
  const auto r = run(small_config(12));
  const ModelBundle bundle{r.models[1].model, r.normalization};
  std::stringstream s;
  write_model_bundle(s, bundle);
  const auto back = read_model_bundle(s);
  CHECK(back.model == bundle.model);
  CHECK(back.normalization == bundle.normalization);
}

TEST_CASE("evaluate on a single row omits Pearson") {
  const auto r = run(small_config(13));
  const auto d = synthesize(r.seeds.dataset);
  const std::size_t rows[] = {r.split.test.front()};
  const auto e = evaluate(r.models[0].model, d, rows, r.normalization, Stage::test);
  for (const auto& o : e.report.outputs) CHECK_FALSE(o.r_pearson.has_value());
  CHECK(e.predicted[0] == r.models[0].test_predicted[0]);
}

TEST_CASE("emit_reports writes every file and fails cleanly on a bad directory") {
  const auto r = run(small_config(14));
  const auto dir = std::filesystem::temp_directory_path() / "annpso_test_emit";
  std::filesystem::remove_all(dir);
  const auto written = emit_reports(r, dir);
  CHECK(written.size() == render_reports(r).size());
  for (const auto& [name, contents] : render_reports(r)) CHECK(read_file(dir / name) == contents);
  std::filesystem::remove_all(dir);

  const auto blocker = std::filesystem::temp_directory_path() / "annpso_test_blocker";
  write_files_atomically(blocker.parent_path(), {{blocker.filename().string(), "x"}});
  try {
    emit_reports(r, blocker / "sub");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
  std::filesystem::remove(blocker);
}

TEST_CASE("a failing model is named") {
  auto c = small_config();
  c.models[2].label = "broken";
  c.models[2].pso.swarm_size = 1;
  try {
    run(c);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("broken") != std::string::npos);
  }
}

TEST_CASE("median summary over repeats") {
  const auto results = run_repeated(small_config(20), 3);
  REQUIRE(results.size() == 3);
  CHECK(results[1].seed == 21);
  const auto rows = median_summary(results);
  REQUIRE(rows.size() == 4);
  for (std::size_t m = 0; m < 4; ++m) {
    std::vector<double> v;
    for (const auto& r : results) v.push_back(r.models[m].test.mean_rmse());
    std::sort(v.begin(), v.end());
    CHECK(rows[m].test_mean_rmse == v[1]);
  }
}

TEST_CASE("swarm-300 model beats the ANN baseline on noise-free data in most seeds") {
  auto c = paper_preset();
  c.dataset.noise_scale = 0.0;
  int wins = 0;
  for (const auto& r : run_repeated(c, 10))
    if (r.models[3].test.mean_rmse() <= r.models[0].test.mean_rmse()) ++wins;
  MESSAGE("wins: " << wins << " of 10");
  CHECK(wins >= 7);
}
