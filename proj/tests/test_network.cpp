#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "annpso/error.hpp"
#include "annpso/network.hpp"
#include "annpso/random.hpp"

using namespace annpso;

namespace {

ParameterVector random_params(const NetworkSpec& spec, Rng& rng, double scale) {
  std::vector<double> v(spec.parameter_count());
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return ParameterVector(spec, std::move(v));
}

}  // namespace

TEST_CASE("parameter_count") {
  const std::size_t single[] = {2};
  CHECK(parameter_count(single) == 0);
  CHECK(parameter_count(NetworkSpec({1, 1})) == 2);
  // (3*6+6) + (6*2+2) + (2*3+3) = 24 + 14 + 9
  CHECK(parameter_count(NetworkSpec({3, 6, 2, 3})) == 47);
  CHECK(NetworkSpec({3, 4, 2, 3}).parameter_count() == 3 * 4 + 4 + 4 * 2 + 2 + 2 * 3 + 3);
}

TEST_CASE("spec invariants are enforced") {
  CHECK_THROWS_AS(NetworkSpec({3}), Error);
  CHECK_THROWS_AS(NetworkSpec({3, 0, 3}), Error);
  CHECK(NetworkSpec::parse("3-6-2-3") == NetworkSpec({3, 6, 2, 3}));
  CHECK(NetworkSpec::parse("3,4,2,3").to_string() == "3-4-2-3");
  CHECK_THROWS_AS(NetworkSpec::parse("3-x-3"), Error);
  CHECK_THROWS_AS(ParameterVector(NetworkSpec({1, 1}), {1.0}), Error);
}

TEST_CASE("layout is weights row-major by output unit, then biases") {
  const NetworkSpec spec({2, 3, 1});
  const auto& t0 = spec.transition(0);
  CHECK(t0.weight_offset == 0);
  CHECK(t0.bias_offset == 6);
  const auto& t1 = spec.transition(1);
  CHECK(t1.weight_offset == 9);
  CHECK(t1.bias_offset == 12);

  std::vector<double> v(spec.parameter_count());
  std::iota(v.begin(), v.end(), 0.0);
  const auto layers = unflatten(ParameterVector(spec, v));
  REQUIRE(layers.size() == 2);
  CHECK(layers[0].weight(1, 0) == 2.0);  // output 1, input 0
  CHECK(layers[0].biases == std::vector<double>{6, 7, 8});
  CHECK(layers[1].weights == std::vector<double>{9, 10, 11});
  CHECK(layers[1].biases == std::vector<double>{12});
}

TEST_CASE("flatten(unflatten(p)) == p") {
  Rng rng(7);
  for (const auto& sizes : {std::vector<std::size_t>{3, 6, 2, 3}, {1, 1}, {4, 5, 5, 2}}) {
    const NetworkSpec spec(sizes);
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_params(spec, rng, 10.0);
      CHECK(flatten(spec, unflatten(p)) == p);
    }
  }
}

TEST_CASE("forward examples") {
  const NetworkSpec one({1, 1});
  const double five[] = {5.0};
  CHECK(forward(one, ParameterVector::zeros(one), five)[0] == 0.5);

  const NetworkSpec two({2, 1});
  const double zeros[] = {0.0, 0.0};
  CHECK(forward(two, ParameterVector(two, {1.0, 1.0, 0.0}), zeros)[0] == 0.5);

  const double x1[] = {1.0};
  const double expected = 1.0 / (1.0 + std::exp(-2.0));  // 0.8807970779778823
  CHECK(forward(one, ParameterVector(one, {1.0, 1.0}), x1)[0] == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("forward rejects mismatched dimensions") {
  const NetworkSpec spec({3, 6, 2, 3});
  const double short_input[] = {1.0, 2.0};
  try {
    forward(spec, ParameterVector::zeros(spec), short_input);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::dimension_mismatch);
    CHECK(std::string(e.what()).find("expected length 3, got 2") != std::string::npos);
  }
  const double input[] = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(forward(spec, ParameterVector::zeros(NetworkSpec({3, 4, 2, 3})), input), Error);
}

TEST_CASE("forward_with_trace") {
  const NetworkSpec one({1, 1});
  const double three[] = {3.0};
  const auto rec = forward_with_trace(one, ParameterVector::zeros(one), three);
  REQUIRE(rec.layers.size() == 2);
  CHECK(rec.layers[0] == std::vector<double>{3.0});
  CHECK(rec.layers[1] == std::vector<double>{0.5});

  const NetworkSpec deep({2, 1, 1});
  const double zeros[] = {0.0, 0.0};
  const auto rec2 = forward_with_trace(deep, ParameterVector::zeros(deep), zeros);
  CHECK(rec2.layers[1] == std::vector<double>{0.5});
  CHECK(rec2.layers[2] == std::vector<double>{0.5});

  // The last layer of any trace is exactly the forward output.
  Rng rng(11);
  const NetworkSpec spec({3, 6, 2, 3});
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_params(spec, rng, 3.0);
    std::vector<double> x = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    CHECK(forward_with_trace(spec, p, x).layers.back() == forward(spec, p, x));
  }
}

TEST_CASE("outputs stay strictly inside (0, 1), even saturated") {
  Rng rng(3);
  const NetworkSpec spec({3, 6, 2, 3});
  for (double scale : {0.1, 10.0, 1e3, 1e6}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = random_params(spec, rng, scale);
      std::vector<double> x = {rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                               rng.uniform(-scale, scale)};
      for (double y : forward(spec, p, x)) {
        CHECK(y > 0.0);
        CHECK(y < 1.0);
      }
    }
  }
  CHECK(sigmoid(1e308) < 1.0);
  CHECK(sigmoid(-1e308) > 0.0);
  CHECK(sigmoid(0.0) == 0.5);
}

TEST_CASE("predict_batch") {
  const NetworkSpec spec({3, 6, 2, 3});
  Rng rng(5);
  const auto p = random_params(spec, rng, 1.0);

  CHECK(predict_batch(spec, p, {}).empty());

  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 81; ++i)
    rows.push_back({rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)});
  for (auto exec : {Execution::serial, Execution::parallel}) {
    const auto out = predict_batch(spec, p, rows, exec);
    REQUIRE(out.size() == 81);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(out[i] == forward(spec, p, rows[i]));
      for (double y : out[i]) CHECK((y > 0.0 && y < 1.0));
    }
  }

  rows[17].pop_back();
  try {
    predict_batch(spec, p, rows);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("row 17") != std::string::npos);
  }
}

TEST_CASE("permuting hidden units consistently leaves the output unchanged") {
  const NetworkSpec spec({3, 6, 2, 3});
  Rng rng(21);
  const auto p = random_params(spec, rng, 2.0);
  auto layers = unflatten(p);
  // swap hidden units 1 and 4 of the first hidden layer
  auto& in = layers[0];
  auto& out = layers[1];
  for (std::size_t i = 0; i < in.inputs; ++i)
    std::swap(in.weights[1 * in.inputs + i], in.weights[4 * in.inputs + i]);
  std::swap(in.biases[1], in.biases[4]);
  for (std::size_t o = 0; o < out.outputs; ++o)
    std::swap(out.weights[o * out.inputs + 1], out.weights[o * out.inputs + 4]);
  const auto q = flatten(spec, layers);
  CHECK(!(q == p));
  const double x[] = {0.3, -0.7, 0.9};
  const auto a = forward(spec, p, x);
  const auto b = forward(spec, q, x);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-14));
}
