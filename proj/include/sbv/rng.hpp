#pragma once

#include <cstdint>

namespace sbv {

// Portable deterministic PRNG (splitmix64). We never use <random>
// distributions: their output is implementation-defined, and every sampled
// number here must reproduce bit-for-bit across platforms and reruns.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Unbiased integer in [0, n). Lemire multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n) {
    using u128 = __uint128_t;
    u128 m = static_cast<u128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0ULL - n) % n;
      while (lo < threshold) {
        m = static_cast<u128>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream keyed by (seed, a, b, c). Work items (a ray, a voxel, a
// sweep) each draw from their own stream so parallel scheduling cannot change
// what any item sees.
inline Rng stream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                  std::uint64_t c = 0) {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (a + 0xbf58476d1ce4e5b9ULL));
  h = mix64(h ^ (b + 0x94d049bb133111ebULL));
  h = mix64(h ^ (c + 0x2545f4914f6cdd1dULL));
  return Rng(h);
}

}  // namespace sbv
