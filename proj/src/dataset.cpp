#include "annpso/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "annpso/error.hpp"
#include "annpso/random.hpp"
#include "annpso/text_io.hpp"

namespace annpso {

std::array<double, Sample::column_count> Sample::columns() const noexcept {
  return {a_drum_concave_distance, b_fan_speed,     c_sieve_openness,
          bs_broken_seeds,         pl_product_loss, mog_material_other_than_grain};
}

Sample Sample::from_columns(const std::array<double, column_count>& v) noexcept {
  return Sample{v[0], v[1], v[2], v[3], v[4], v[5]};
}

const std::array<std::string, Sample::column_count>& column_names() {
  static const std::array<std::string, Sample::column_count> names = {"A",  "B",  "C",
                                                                      "BS", "PL", "MOG"};
  return names;
}

std::vector<std::string> output_names() { return {"BS", "PL", "MOG"}; }

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::ingested ? "ingested" : "synthetic";
}

Dataset parse_dataset(std::string_view text, std::string_view source) {
  const std::string where(source);
  std::vector<std::string_view> lines;
  std::vector<std::size_t> line_numbers;
  {
    std::size_t pos = 0, number = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      ++number;
      auto line = text.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      const auto trimmed = text::trim(line);
      if (!trimmed.empty() && trimmed.front() != '#') {
        lines.push_back(line);
        line_numbers.push_back(number);
      }
      pos = end + 1;
    }
  }
  if (lines.empty()) throw Error(ErrorKind::parse, where + ": empty dataset (no header)");

  const char delimiter = lines.front().find('\t') != std::string_view::npos ? '\t' : ',';
  const auto header = text::split(lines.front(), delimiter);
  std::array<std::size_t, Sample::column_count> position{};
  for (std::size_t c = 0; c < Sample::column_count; ++c) {
    const auto wanted = text::lower(column_names()[c]);
    auto it = std::find_if(header.begin(), header.end(), [&](std::string_view h) {
      return text::lower(text::trim(h)) == wanted;
    });
    if (it == header.end())
      throw Error(ErrorKind::parse, where + ": missing column " + column_names()[c]);
    position[c] = static_cast<std::size_t>(it - header.begin());
  }
  if (lines.size() == 1) throw Error(ErrorKind::parse, where + ": empty dataset");

  Dataset dataset;
  dataset.provenance = Provenance::ingested;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = text::split(lines[r], delimiter);
    const std::string row_label = "row " + std::to_string(r) + " (line " +
                                  std::to_string(line_numbers[r]) + ")";
    if (fields.size() != header.size())
      throw Error(ErrorKind::parse, where + ": " + row_label + " has " +
                                        std::to_string(fields.size()) + " fields, header has " +
                                        std::to_string(header.size()));
    std::array<double, Sample::column_count> values{};
    for (std::size_t c = 0; c < Sample::column_count; ++c) {
      if (!text::parse_double(fields[position[c]], values[c]) || !std::isfinite(values[c]))
        throw Error(ErrorKind::parse, where + ": " + row_label + ", column " +
                                          column_names()[c] + ": '" +
                                          std::string(text::trim(fields[position[c]])) +
                                          "' is not a finite number");
    }
    const auto sample = Sample::from_columns(values);
    if (sample.b_fan_speed < fan_speed_min_rpm || sample.b_fan_speed > fan_speed_max_rpm)
      dataset.warnings.push_back(where + ": " + row_label + ": fan speed " +
                                 text::format_double(sample.b_fan_speed) +
                                 " rpm outside [440, 1060]");
    dataset.samples.push_back(sample);
  }
  return dataset;
}

Dataset ingest(const std::filesystem::path& path) {
  return parse_dataset(text::read_file(path), path.string());
}

std::string format_dataset(const Dataset& dataset) {
  std::ostringstream out;
  if (dataset.synthesis) {
    out << "# synthetic seed=" << dataset.synthesis->seed
        << " noise_scale=" << text::format_double(dataset.synthesis->noise_scale)
        << " surface=" << dataset.synthesis->surface_version << '\n';
  }
  const auto& names = column_names();
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';
  for (const auto& s : dataset.samples) {
    const auto v = s.columns();
    for (std::size_t c = 0; c < v.size(); ++c) out << (c ? "," : "") << text::format_double(v[c]);
    out << '\n';
  }
  return out.str();
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  auto dir = path.parent_path();
  if (dir.empty()) dir = ".";
  text::write_files_atomically(dir, {{path.filename().string(), format_dataset(dataset)}});
}

std::array<double, 3> response_surface(double a_mm, double b_rpm, double c_mm) noexcept {
  const double a = (a_mm - 6.5) / 3.5;
  const double b = (b_rpm - 750.0) / 310.0;
  const double c = (c_mm - 10.0) / 5.0;
  const double bs = 0.45 - 0.20 * a + 0.06 * b + 0.03 * c + 0.08 * a * a + 0.03 * b * b +
                    0.04 * a * b;
  const double pl = 18.0 + 4.0 * a + 7.0 * b - 5.0 * c + 3.0 * a * a + 4.0 * b * b +
                    2.0 * c * c + 2.5 * b * c - 1.5 * a * c;
  const double mog = 2.5 - 0.4 * a - 0.6 * b + 0.8 * c + 0.2 * a * a + 0.3 * c * c -
                     0.25 * b * c;
  return {bs, pl, mog};
}

Dataset synthesize(std::uint64_t seed, double noise_scale) {
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
    throw Error(ErrorKind::invalid_argument, "noise_scale must be a finite value >= 0");
  Rng rng(seed);
  Dataset dataset;
  dataset.provenance = Provenance::synthetic;
  dataset.synthesis = SynthesisInfo{seed, noise_scale, std::string(surface_version)};
  for (double a : levels_a_mm)
    for (double b : levels_b_rpm)
      for (double c : levels_c_mm) {
        const auto clean = response_surface(a, b, c);
        for (std::size_t rep = 0; rep < synthetic_repetitions; ++rep) {
          std::array<double, 3> y = clean;
          // Draws happen even at zero noise so the stream layout never depends on it.
          for (std::size_t k = 0; k < y.size(); ++k)
            y[k] += noise_scale * noise_units[k] * rng.normal();
          dataset.samples.push_back(Sample{a, b, c, y[0], y[1], y[2]});
        }
      }
  return dataset;
}

double NormalizationSpec::apply(std::size_t column, double value) const noexcept {
  const auto& r = columns[column];
  return target_lo + (value - r.min) / (r.max - r.min) * (target_hi - target_lo);
}

double NormalizationSpec::invert(std::size_t column, double value) const noexcept {
  const auto& r = columns[column];
  return r.min + (value - target_lo) / (target_hi - target_lo) * (r.max - r.min);
}

std::vector<double> NormalizationSpec::normalized_inputs(const Sample& s) const {
  const auto v = s.columns();
  std::vector<double> out(Sample::input_count);
  for (std::size_t c = 0; c < Sample::input_count; ++c) out[c] = apply(c, v[c]);
  return out;
}

std::vector<double> NormalizationSpec::normalized_targets(const Sample& s) const {
  const auto v = s.columns();
  std::vector<double> out(Sample::output_count);
  for (std::size_t k = 0; k < Sample::output_count; ++k)
    out[k] = apply(Sample::input_count + k, v[Sample::input_count + k]);
  return out;
}

std::vector<double> NormalizationSpec::denormalize_targets(std::span<const double> values) const {
  if (values.size() != Sample::output_count)
    throw_dimension_mismatch("target vector", Sample::output_count, values.size());
  std::vector<double> out(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    out[k] = invert(Sample::input_count + k, values[k]);
  return out;
}

NormalizationSpec fit_normalization(const Dataset& dataset, std::span<const std::size_t> rows) {
  if (rows.empty()) throw Error(ErrorKind::invalid_argument, "cannot fit normalization on no rows");
  NormalizationSpec spec;
  for (std::size_t c = 0; c < Sample::column_count; ++c) {
    double lo = dataset.samples.at(rows[0]).columns()[c];
    double hi = lo;
    for (auto r : rows) {
      const double v = dataset.samples.at(r).columns()[c];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!(lo < hi))
      throw Error(ErrorKind::invalid_argument,
                  "column " + column_names()[c] + " is constant; cannot normalize");
    spec.columns[c] = {lo, hi};
  }
  return spec;
}

NormalizationSpec fit_normalization(const Dataset& dataset) {
  std::vector<std::size_t> rows(dataset.size());
  std::iota(rows.begin(), rows.end(), 0);
  return fit_normalization(dataset, rows);
}

std::size_t train_size_for(std::size_t n, double train_fraction) {
  return static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 0.5));
}

SplitIndices split(const Dataset& dataset, double train_fraction, std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (n < 2) throw Error(ErrorKind::invalid_argument, "split needs at least two samples");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(ErrorKind::invalid_argument, "train_fraction must lie in (0, 1)");
  const std::size_t n_train = train_size_for(n, train_fraction);
  if (n_train == 0 || n_train == n)
    throw Error(ErrorKind::invalid_argument,
                "train_fraction " + text::format_double(train_fraction) + " leaves an empty " +
                    (n_train == 0 ? "train" : "test") + " side for " + std::to_string(n) +
                    " samples");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  SplitIndices out;
  out.seed = seed;
  out.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace annpso
