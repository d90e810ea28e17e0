#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <tuple>

#include "annpso/dataset.hpp"
#include "annpso/error.hpp"
#include "annpso/random.hpp"

using namespace annpso;

TEST_CASE("synthesize: grid structure") {
  const auto d = synthesize(1);
  CHECK(d.size() == 81);
  CHECK(d.provenance == Provenance::synthetic);
  std::map<std::tuple<double, double, double>, int> counts;
  for (const auto& s : d.samples)
    ++counts[{s.a_drum_concave_distance, s.b_fan_speed, s.c_sieve_openness}];
  CHECK(counts.size() == 27);
  for (const auto& [key, n] : counts) CHECK(n == 3);
}

TEST_CASE("synthesize: noise-free responses ignore the seed") {
  const auto a = synthesize(1, 0.0);
  const auto b = synthesize(999, 0.0);
  CHECK(a.samples == b.samples);
  CHECK(synthesize(4).samples == synthesize(4).samples);
  CHECK(synthesize(4).samples != synthesize(5).samples);
}

TEST_CASE("synthesize: grid corners match the surface formula") {
  // Frozen from an independent evaluation of the documented polynomial.
  struct Corner {
    double a, b, c, bs, pl, mog;
  };
  const Corner corners[] = {
      {3, 440, 5, 0.71, 22, 2.95},    {3, 440, 15, 0.77, 10, 5.05},
      {3, 1060, 5, 0.75, 31, 2.25},   {3, 1060, 15, 0.81, 29, 3.35},
      {10, 440, 5, 0.23, 33, 2.15},   {10, 440, 15, 0.29, 15, 4.25},
      {10, 1060, 5, 0.43, 42, 1.45},  {10, 1060, 15, 0.49, 34, 2.55},
  };
  const auto d = synthesize(3, 0.0);
  for (const auto& k : corners) {
    const auto it = std::find_if(d.samples.begin(), d.samples.end(), [&](const Sample& s) {
      return s.a_drum_concave_distance == k.a && s.b_fan_speed == k.b && s.c_sieve_openness == k.c;
    });
    REQUIRE(it != d.samples.end());
    CHECK(it->bs_broken_seeds == doctest::Approx(k.bs).epsilon(1e-12));
    CHECK(it->pl_product_loss == doctest::Approx(k.pl).epsilon(1e-12));
    CHECK(it->mog_material_other_than_grain == doctest::Approx(k.mog).epsilon(1e-12));
  }
}

TEST_CASE("ingest: header matching and errors") {
  const auto d = parse_dataset("mog, bs ,PL,a,B,C\n1,2,3,4,500,6\n\n");
  REQUIRE(d.size() == 1);
  CHECK(d.samples[0] == Sample{4, 500, 6, 2, 3, 1});
  CHECK(d.warnings.empty());

  const auto tabbed = parse_dataset("A\tB\tC\tBS\tPL\tMOG\n1\t2000\t3\t4\t5\t6\n");
  CHECK(tabbed.size() == 1);
  CHECK(tabbed.warnings.size() == 1);  // fan speed outside the machine range

  auto message = [](std::string_view text) {
    try {
      parse_dataset(text);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("A,B,C,BS,PL,MOG\n").find("empty dataset") != std::string::npos);
  CHECK(message("").find("empty dataset") != std::string::npos);
  CHECK(message("A,B,C,BS,PL\n1,2,3,4,5\n").find("missing column MOG") != std::string::npos);
  const auto bad = message("A,B,C,BS,PL,MOG\n1,2,3,4,5,6\n1,2,x,4,5,6\n");
  CHECK(bad.find("row 2") != std::string::npos);
  CHECK(bad.find("column C") != std::string::npos);
}

TEST_CASE("dataset text round trip is exact") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto d = synthesize(seed, 0.7);
    const auto back = parse_dataset(format_dataset(d));
    CHECK(back.samples == d.samples);
  }
  const auto path = std::filesystem::temp_directory_path() / "annpso_test_dataset.csv";
  const auto d = synthesize(8);
  write_dataset(path, d);
  CHECK(ingest(path).samples == d.samples);
  CHECK(format_dataset(d).rfind("# synthetic seed=8", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("normalization") {
  Dataset d;
  d.samples = {{0, 440, 5, 0.1, 1, 2}, {10, 1060, 15, 0.9, 3, 4}};
  const auto n = fit_normalization(d);
  CHECK(n.apply(0, 0.0) == doctest::Approx(0.1));
  CHECK(n.apply(0, 10.0) == doctest::Approx(0.9));
  CHECK(n.apply(0, 5.0) == doctest::Approx(0.5));
  // not clamped outside the fitted range
  CHECK(n.apply(0, 20.0) == doctest::Approx(1.7));
  CHECK(n.apply(0, -10.0) == doctest::Approx(-0.7));

  Rng rng(9);
  const auto wide = synthesize(2);
  const auto nw = fit_normalization(wide);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t c = rng.below(6);
    const double x = rng.uniform(-2000, 2000);
    const double scale = std::max(std::abs(x), nw.columns[c].max - nw.columns[c].min);
    CHECK(std::abs(nw.invert(c, nw.apply(c, x)) - x) <= 1e-12 * scale);
  }

  d.samples[1].pl_product_loss = 1;
  try {
    fit_normalization(d);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("column PL") != std::string::npos);
  }
}

TEST_CASE("normalization fitted on the train split leaves test values unclamped") {
  const auto d = synthesize(6);
  const auto s = split(d, 0.7, 6);
  const auto n = fit_normalization(d, s.train);
  // construct a point beyond the train maximum of A
  Sample beyond = d.samples[s.test.front()];
  beyond.a_drum_concave_distance = n.columns[0].max + 1.0;
  CHECK(n.normalized_inputs(beyond)[0] > 0.9);
}

TEST_CASE("fitting on normalized data gives the identity map") {
  const auto d = synthesize(10);
  const auto n = fit_normalization(d);
  Dataset normalized;
  for (const auto& s : d.samples) {
    auto cols = s.columns();
    for (std::size_t c = 0; c < cols.size(); ++c) cols[c] = n.apply(c, cols[c]);
    normalized.samples.push_back(Sample::from_columns(cols));
  }
  const auto again = fit_normalization(normalized);
  for (std::size_t c = 0; c < Sample::column_count; ++c) {
    CHECK(again.columns[c].min == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(again.columns[c].max == doctest::Approx(0.9).epsilon(1e-12));
  }
}

TEST_CASE("split") {
  CHECK(train_size_for(81, 0.7) == 57);
  CHECK(train_size_for(10, 0.7) == 7);
  CHECK(train_size_for(5, 0.5) == 3);  // half rounds up

  const auto d = synthesize(1);
  const auto s = split(d, 0.7, 123);
  CHECK(s.train.size() == 57);
  CHECK(s.test.size() == 24);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  for (auto i : s.test) CHECK(all.insert(i).second);
  CHECK(all.size() == 81);
  CHECK(*all.rbegin() == 80);
  CHECK(split(d, 0.7, 123) == s);
  CHECK(split(d, 0.7, 124) != s);

  Dataset two;
  two.samples.resize(2);
  CHECK_THROWS_AS(split(two, 0.1, 1), Error);
  CHECK_THROWS_AS(split(two, 0.9, 1), Error);
  Dataset one;
  one.samples.resize(1);
  CHECK_THROWS_AS(split(one, 0.5, 1), Error);
}
