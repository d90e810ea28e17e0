#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace annpso {

// Actual values A and predictions P of equal, nonzero length; all finite.
class PairedSeries {
public:
  PairedSeries(std::vector<double> actual, std::vector<double> predicted);

  std::span<const double> actual() const noexcept { return actual_; }
  std::span<const double> predicted() const noexcept { return predicted_; }
  std::size_t size() const noexcept { return actual_.size(); }

private:
  std::vector<double> actual_;
  std::vector<double> predicted_;
};

// sqrt(sum (A - P)^2 / N)
double rmse(const PairedSeries& s);

// sqrt(1 - sum (A - P)^2 / sum A^2), the radicand clamped at zero.
// Throws Error(invalid_argument) when every actual value is zero.
double r_paper(const PairedSeries& s);

struct RPaperValue {
  double value = 0.0;
  bool clamped = false;  // the residual sum exceeded sum A^2
};
RPaperValue r_paper_checked(const PairedSeries& s);

// Number of r_paper evaluations (process-wide) whose radicand was clamped.
std::size_t r_paper_clamp_count() noexcept;

// Sample Pearson correlation. Needs N >= 2 and variance in both series.
double r_pearson(const PairedSeries& s);

// sum |A - P| / N
double mae(const PairedSeries& s);

struct OutputMetrics {
  std::string name;
  double rmse = 0.0;
  double r_paper = 0.0;
  std::optional<double> r_pearson;  // absent when undefined (N < 2 or zero variance)
  double mae = 0.0;
  bool r_paper_clamped = false;

  friend bool operator==(const OutputMetrics&, const OutputMetrics&) = default;
};

enum class Stage { train, test };

struct MetricsReport {
  Stage stage = Stage::train;
  std::vector<OutputMetrics> outputs;  // in output-unit order (BS, PL, MOG)

  const OutputMetrics& at(std::string_view name) const;
  double mean_rmse() const;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

std::string_view to_string(Stage stage) noexcept;

// Per-output metrics, column k of `actual` against column k of `predicted`.
MetricsReport compute_report(Stage stage, std::span<const std::string> names,
                             std::span<const std::vector<double>> actual,
                             std::span<const std::vector<double>> predicted);

}  // namespace annpso
