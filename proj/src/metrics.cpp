#include "annpso/metrics.hpp"

#include <atomic>
#include <cmath>

#include "annpso/error.hpp"

namespace annpso {

namespace {
std::atomic<std::size_t> clamp_counter{0};
}

PairedSeries::PairedSeries(std::vector<double> actual, std::vector<double> predicted)
    : actual_(std::move(actual)), predicted_(std::move(predicted)) {
  if (actual_.empty()) throw Error(ErrorKind::invalid_argument, "paired series is empty");
  if (predicted_.size() != actual_.size())
    throw_dimension_mismatch("predicted series", actual_.size(), predicted_.size());
  for (std::size_t i = 0; i < actual_.size(); ++i) {
    if (!std::isfinite(actual_[i]) || !std::isfinite(predicted_[i]))
      throw Error(ErrorKind::invalid_argument,
                  "paired series has a non-finite value at index " + std::to_string(i));
  }
}

double rmse(const PairedSeries& s) {
  double sse = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double e = s.actual()[i] - s.predicted()[i];
    sse += e * e;
  }
  return std::sqrt(sse / static_cast<double>(s.size()));
}

RPaperValue r_paper_checked(const PairedSeries& s) {
  double sse = 0.0;
  double ssa = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = s.actual()[i];
    const double e = a - s.predicted()[i];
    sse += e * e;
    ssa += a * a;
  }
  if (ssa == 0.0)
    throw Error(ErrorKind::invalid_argument, "r_paper is undefined for an all-zero actual series");
  const double radicand = 1.0 - sse / ssa;
  if (radicand < 0.0) {
    clamp_counter.fetch_add(1, std::memory_order_relaxed);
    return {0.0, true};
  }
  return {std::sqrt(radicand), false};
}

double r_paper(const PairedSeries& s) { return r_paper_checked(s).value; }

std::size_t r_paper_clamp_count() noexcept { return clamp_counter.load(); }

double r_pearson(const PairedSeries& s) {
  const std::size_t n = s.size();
  if (n < 2) throw Error(ErrorKind::invalid_argument, "r_pearson needs at least two points");
  double mean_a = 0.0, mean_p = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += s.actual()[i];
    mean_p += s.predicted()[i];
  }
  mean_a /= static_cast<double>(n);
  mean_p /= static_cast<double>(n);
  double saa = 0.0, spp = 0.0, sap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = s.actual()[i] - mean_a;
    const double dp = s.predicted()[i] - mean_p;
    saa += da * da;
    spp += dp * dp;
    sap += da * dp;
  }
  if (saa == 0.0 || spp == 0.0)
    throw Error(ErrorKind::invalid_argument, "r_pearson is undefined for a constant series");
  const double r = sap / std::sqrt(saa * spp);
  return std::fmax(-1.0, std::fmin(1.0, r));
}

double mae(const PairedSeries& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += std::abs(s.actual()[i] - s.predicted()[i]);
  return sum / static_cast<double>(s.size());
}

const OutputMetrics& MetricsReport::at(std::string_view name) const {
  for (const auto& o : outputs)
    if (o.name == name) return o;
  throw Error(ErrorKind::invalid_argument, "no metrics for output '" + std::string(name) + "'");
}

double MetricsReport::mean_rmse() const {
  double sum = 0.0;
  for (const auto& o : outputs) sum += o.rmse;
  return outputs.empty() ? 0.0 : sum / static_cast<double>(outputs.size());
}

std::string_view to_string(Stage stage) noexcept {
  return stage == Stage::train ? "train" : "test";
}

MetricsReport compute_report(Stage stage, std::span<const std::string> names,
                             std::span<const std::vector<double>> actual,
                             std::span<const std::vector<double>> predicted) {
  if (predicted.size() != actual.size())
    throw_dimension_mismatch("prediction rows", actual.size(), predicted.size());
  MetricsReport report;
  report.stage = stage;
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<double> a, p;
    a.reserve(actual.size());
    p.reserve(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
      if (actual[i].size() != names.size())
        throw_dimension_mismatch("actual row " + std::to_string(i), names.size(), actual[i].size());
      if (predicted[i].size() != names.size())
        throw_dimension_mismatch("predicted row " + std::to_string(i), names.size(),
                                 predicted[i].size());
      a.push_back(actual[i][k]);
      p.push_back(predicted[i][k]);
    }
    PairedSeries s(std::move(a), std::move(p));
    OutputMetrics m;
    m.name = names[k];
    m.rmse = rmse(s);
    m.mae = mae(s);
    const auto rp = r_paper_checked(s);
    m.r_paper = rp.value;
    m.r_paper_clamped = rp.clamped;
    try {
      m.r_pearson = r_pearson(s);
    } catch (const Error&) {
      m.r_pearson.reset();
    }
    report.outputs.push_back(std::move(m));
  }
  return report;
}

}  // namespace annpso
