#pragma once

#include <cstdint>

namespace sistk {

// Deterministic 64-bit generator (splitmix64). All dataset generation and
// sampling in this project goes through this class so that a fixed seed
// reproduces byte-identical output on any platform. The update constants
// and output mixing are part of the file-format contract; do not change.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n). Multiply-shift mapping, no rejection,
  // so the consumed stream length is independent of n.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Uniform double in [0, 1) with 53 random mantissa bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [-1, 1).
  double next_symmetric() { return 2.0 * next_double() - 1.0; }

  // Approximate standard normal (Irwin-Hall, sum of 12 uniforms minus 6).
  // Chosen over Box-Muller to avoid libm transcendentals, whose last-bit
  // behaviour differs across platforms.
  double next_gaussian() {
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += next_double();
    return s - 6.0;
  }

 private:
  std::uint64_t state_;
};

}  // namespace sistk
