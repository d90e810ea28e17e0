#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "annpso/error.hpp"
#include "annpso/metrics.hpp"
#include "annpso/random.hpp"

using namespace annpso;

TEST_CASE("rmse") {
  CHECK(rmse({{1, 2, 3}, {1, 2, 3}}) == 0.0);
  CHECK(rmse({{0, 0}, {3, 4}}) == doctest::Approx(3.5355339059327378).epsilon(1e-15));
  CHECK(rmse({{2.5}, {2.5 - 0.75}}) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("r_paper") {
  CHECK(r_paper({{1, 2, 3}, {1, 2, 3}}) == 1.0);
  CHECK(r_paper({{1, 1}, {0, 0}}) == 0.0);
  CHECK(r_paper({{2}, {1}}) == doctest::Approx(0.8660254037844386).epsilon(1e-15));
  CHECK_THROWS_AS(r_paper({{0, 0}, {1, 2}}), Error);
}

TEST_CASE("r_paper clamps a negative radicand and counts it") {
  const auto before = r_paper_clamp_count();
  const auto v = r_paper_checked({{1, 1}, {5, -3}});
  CHECK(v.clamped);
  CHECK(v.value == 0.0);
  CHECK(r_paper_clamp_count() == before + 1);
  CHECK_FALSE(r_paper_checked({{1, 1}, {1, 1}}).clamped);
}

TEST_CASE("r_pearson") {
  CHECK(r_pearson({{1, 2, 5}, {1, 2, 5}}) == doctest::Approx(1.0));
  CHECK(r_pearson({{1, 2, 5}, {-1, -2, -5}}) == doctest::Approx(-1.0));
  CHECK(r_pearson({{1, 2, 3}, {1, 2, 4}}) == doctest::Approx(0.9819805060619656).epsilon(1e-14));
  CHECK_THROWS_AS(r_pearson({{1}, {1}}), Error);
  CHECK_THROWS_AS(r_pearson({{1, 1, 1}, {1, 2, 3}}), Error);
}

TEST_CASE("mae") {
  CHECK(mae({{4, 5}, {4, 5}}) == 0.0);
  CHECK(mae({{0, 0}, {3, -3}}) == 3.0);
}

TEST_CASE("paired series validation") {
  CHECK_THROWS_AS(PairedSeries({}, {}), Error);
  CHECK_THROWS_AS(PairedSeries({1, 2}, {1}), Error);
  CHECK_THROWS_AS(PairedSeries({1, NAN}, {1, 2}), Error);
}

TEST_CASE("properties over random series") {
  Rng rng(314);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<double> a(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(-5, 5);
      p[i] = a[i] + rng.uniform(-2, 2);
    }
    const PairedSeries s(a, p);
    CHECK(mae(s) <= rmse(s) * (1 + 1e-15));

    const double shift = rng.uniform(-100, 100);
    std::vector<double> as(a), ps(p), pa(p);
    for (auto& v : as) v += shift;
    for (auto& v : ps) v += shift;
    const double scale = rng.uniform(0.1, 10);
    for (auto& v : pa) v = scale * v + shift;
    const PairedSeries shifted(as, ps);
    CHECK(rmse(shifted) == doctest::Approx(rmse(s)).epsilon(1e-9));
    CHECK(mae(shifted) == doctest::Approx(mae(s)).epsilon(1e-9));
    CHECK(r_pearson(shifted) == doctest::Approx(r_pearson(s)).epsilon(1e-9));
    CHECK(r_pearson({a, pa}) == doctest::Approx(r_pearson(s)).epsilon(1e-9));
  }
  // equality when all absolute errors are equal
  const PairedSeries equal_err({0, 1, 2}, {1, 0, 3});
  CHECK(mae(equal_err) == doctest::Approx(rmse(equal_err)));
}

TEST_CASE("r_paper is not shift invariant") {
  const PairedSeries s({1, 2, 3}, {1.5, 2.5, 2.0});
  const PairedSeries shifted({11, 12, 13}, {11.5, 12.5, 12.0});
  CHECK(r_paper(s) != doctest::Approx(r_paper(shifted)));
}

TEST_CASE("compute_report") {
  const std::vector<std::string> names = {"BS", "PL", "MOG"};
  const std::vector<std::vector<double>> actual = {{0.2, 10, 1}, {0.4, 20, 2}, {0.3, 15, 3}};
  const auto exact = compute_report(Stage::test, names, actual, actual);
  for (const auto& o : exact.outputs) {
    CHECK(o.rmse == 0.0);
    CHECK(o.mae == 0.0);
    CHECK(o.r_paper == 1.0);
  }
  CHECK(exact.at("PL").name == "PL");
  CHECK(exact.mean_rmse() == 0.0);

  const std::vector<std::vector<double>> one = {{0.2, 10, 1}};
  const std::vector<std::vector<double>> one_pred = {{0.25, 12, 1}};
  const auto single = compute_report(Stage::train, names, one, one_pred);
  CHECK_FALSE(single.outputs[0].r_pearson.has_value());
  CHECK(single.outputs[1].rmse == doctest::Approx(2.0));
  CHECK(single.outputs[1].mae == doctest::Approx(2.0));
}
