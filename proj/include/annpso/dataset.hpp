#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace annpso {

// One harvester observation: three machine settings and three responses.
struct Sample {
  double a_drum_concave_distance = 0.0;  // mm
  double b_fan_speed = 0.0;              // rpm
  double c_sieve_openness = 0.0;         // mm
  double bs_broken_seeds = 0.0;
  double pl_product_loss = 0.0;
  double mog_material_other_than_grain = 0.0;

  static constexpr std::size_t column_count = 6;
  static constexpr std::size_t input_count = 3;
  static constexpr std::size_t output_count = 3;

  std::array<double, column_count> columns() const noexcept;
  static Sample from_columns(const std::array<double, column_count>& values) noexcept;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Column names in canonical order: A, B, C, BS, PL, MOG.
const std::array<std::string, Sample::column_count>& column_names();
// BS, PL, MOG
std::vector<std::string> output_names();

inline constexpr double fan_speed_min_rpm = 440.0;
inline constexpr double fan_speed_max_rpm = 1060.0;

enum class Provenance { ingested, synthetic };
std::string_view to_string(Provenance p) noexcept;

struct SynthesisInfo {
  std::uint64_t seed = 0;
  double noise_scale = 0.0;
  std::string surface_version;

  friend bool operator==(const SynthesisInfo&, const SynthesisInfo&) = default;
};

struct Dataset {
  std::vector<Sample> samples;
  Provenance provenance = Provenance::ingested;
  std::optional<SynthesisInfo> synthesis;
  std::vector<std::string> warnings;  // e.g. fan speed outside the machine's range

  std::size_t size() const noexcept { return samples.size(); }
};

// Delimited text with a header row naming A, B, C, BS, PL, MOG in any order
// (trimmed, case-insensitive). Comma or tab, detected from the header. Lines
// starting with '#' and blank lines are skipped.
Dataset parse_dataset(std::string_view text, std::string_view source = "<memory>");
Dataset ingest(const std::filesystem::path& path);

// Canonical comma-separated form with shortest round-trip numerals. Synthetic
// datasets get a leading '#' line recording seed, noise scale, and surface.
std::string format_dataset(const Dataset& dataset);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);

// Synthetic response surface standing in for the unpublished field data.
//
// With factors coded to [-1, 1],
//   a = (A - 6.5) / 3.5,  b = (B - 750) / 310,  c = (C - 10) / 5,
// the noise-free responses are
//   BS  = 0.45 - 0.20a + 0.06b + 0.03c + 0.08a^2 + 0.03b^2 + 0.04ab
//   PL  = 18 + 4a + 7b - 5c + 3a^2 + 4b^2 + 2c^2 + 2.5bc - 1.5ac
//   MOG = 2.5 - 0.4a - 0.6b + 0.8c + 0.2a^2 + 0.3c^2 - 0.25bc
// Noise is Gaussian with standard deviation noise_scale times the unit
// {BS: 0.1, PL: 4.0, MOG: 0.4}.
inline constexpr std::string_view surface_version = "harvester-quadratic-v1";
inline constexpr double default_noise_scale = 0.25;
inline constexpr std::array<double, 3> levels_a_mm = {3.0, 6.5, 10.0};
inline constexpr std::array<double, 3> levels_b_rpm = {440.0, 750.0, 1060.0};
inline constexpr std::array<double, 3> levels_c_mm = {5.0, 10.0, 15.0};
inline constexpr std::size_t synthetic_repetitions = 3;
inline constexpr std::array<double, 3> noise_units = {0.1, 4.0, 0.4};

std::array<double, 3> response_surface(double a_mm, double b_rpm, double c_mm) noexcept;

// Full 3x3x3 grid with three repetitions (81 rows), A-major then B, C, and the
// repetition innermost.
Dataset synthesize(std::uint64_t seed, double noise_scale = default_noise_scale);

struct ColumnRange {
  double min = 0.0;
  double max = 1.0;

  friend bool operator==(const ColumnRange&, const ColumnRange&) = default;
};

// Per-column affine map [min, max] -> [target_lo, target_hi]. Values outside
// the fitted range map outside the target interval; nothing is clamped.
struct NormalizationSpec {
  std::array<ColumnRange, Sample::column_count> columns{};
  double target_lo = 0.1;
  double target_hi = 0.9;

  double apply(std::size_t column, double value) const noexcept;
  double invert(std::size_t column, double value) const noexcept;

  std::vector<double> normalized_inputs(const Sample& s) const;
  std::vector<double> normalized_targets(const Sample& s) const;
  std::vector<double> denormalize_targets(std::span<const double> values) const;

  friend bool operator==(const NormalizationSpec&, const NormalizationSpec&) = default;
};

// Fits min/max on the selected rows. Throws Error(invalid_argument) naming a
// column whose values are all equal.
NormalizationSpec fit_normalization(const Dataset& dataset, std::span<const std::size_t> rows);
NormalizationSpec fit_normalization(const Dataset& dataset);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;

  friend bool operator==(const SplitIndices&, const SplitIndices&) = default;
};

// Train size is round-half-up(train_fraction * N). The permutation is a seeded
// Fisher-Yates shuffle; each side keeps ascending index order.
SplitIndices split(const Dataset& dataset, double train_fraction, std::uint64_t seed);
std::size_t train_size_for(std::size_t n, double train_fraction);

}  // namespace annpso
