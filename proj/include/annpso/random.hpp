#pragma once

#include <cstdint>
#include <random>

namespace annpso {

// Seeded generator with platform-independent derived distributions.
// std::uniform_real_distribution and friends are implementation-defined, so the
// conversions from raw 64-bit draws are done here to keep runs reproducible.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal via Box-Muller.
  double normal();

  friend bool operator==(const Rng&, const Rng&) = default;

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Decorrelates child seeds drawn from one master seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

}  // namespace annpso
