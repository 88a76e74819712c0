#pragma once

#include <cstdint>
#include <random>

namespace logens {

// std::normal_distribution and std::uniform_int_distribution are
// implementation-defined, so seeded streams would differ between standard
// libraries. All randomness goes through this generator instead:
// std::mt19937_64 (fully specified) with Box-Muller normals and rejection
// sampled bounded integers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal draw.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace logens
