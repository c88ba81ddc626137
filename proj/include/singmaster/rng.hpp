#pragma once

#include <cstdint>

namespace singmaster {

// SplitMix64.  Used instead of std::mt19937_64 + distributions because the
// standard distributions are not bit-reproducible across library
// implementations, and byte-identical reruns are part of the output contract.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 random bits; exact same bytes on every platform.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); n > 0.  Modulo bias is irrelevant at our n.
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

}  // namespace singmaster
