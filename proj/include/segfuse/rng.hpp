#pragma once

#include <cstdint>

namespace segfuse {

// splitmix64: 64-bit splittable counter-based generator. The k-th output
// for a given seed is a pure function of (seed, k), so identically seeded
// streams are bit-identical on every platform and in every language that
// implements the same three xor-shift/multiply rounds.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), from the top 53 bits. Exact IEEE arithmetic,
  // reproducible everywhere.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double next_in(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Uniform integer in [0, n). Modulo bias is irrelevant at the scales used
  // here (n far below 2^32) and keeps the mapping trivially portable.
  std::int64_t next_below(std::int64_t n) {
    return static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(n));
  }

 private:
  std::uint64_t state_;
};

}  // namespace segfuse
