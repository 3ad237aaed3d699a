#pragma once

#include <cstdint>
#include <string_view>

namespace newstrend {

// splitmix64 generator with hand-rolled distribution helpers. The standard
// <random> distributions are implementation-defined, so seeded runs would not
// reproduce bit-identically across standard libraries; everything here is
// fully specified.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);

  // Uniform in [0, n). n must be > 0.
  std::size_t index(std::size_t n);

  // Box-Muller normal deviate.
  double normal(double mean = 0.0, double stddev = 1.0);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a 64-bit hash; used for config digests and seed derivation.
std::uint64_t fnv1a64(std::string_view data);

// Stable per-subtask seed derived from a master seed and a role tag.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);

}  // namespace newstrend
