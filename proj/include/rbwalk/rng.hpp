#ifndef RBWALK_RNG_HPP
#define RBWALK_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

// Counter-based random value derivation. Every random quantity in the
// artifact is a pure function of (master seed, stream id, indices), so results
// are identical for any worker count and evaluation order. The mixer is the
// splitmix64 finalizer, which passes BigCrush and gives full avalanche per
// round.

namespace rbwalk::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Fold an index tuple into a single well-mixed key.
inline std::uint64_t derive(std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = 0x2545F4914F6CDD1Dull;
  for (std::uint64_t v : ids) h = mix(h ^ v);
  return h;
}

// Uniform double in (0, 1).
inline double u01(std::uint64_t key) {
  return (static_cast<double>(mix(key) >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two derived sub-streams.
inline double gaussian(std::uint64_t key) {
  const double u1 = u01(key);
  const double u2 = u01(key ^ 0xD1B54A32D192ED03ull);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925 * u2);
}

// Uniform integer in [0, n). Modulo bias is ~n / 2^64, irrelevant here.
inline std::uint64_t bounded(std::uint64_t key, std::uint64_t n) {
  return mix(key) % n;
}

// Stream ids keep unrelated consumers of the same master seed independent.
enum Stream : std::uint64_t {
  kStreamSequence = 1,     // Clifford draws per (k, j)
  kStreamNoise = 2,        // noise values per (mode, component, k, n, index)
  kStreamShots = 3,        // projection-noise sampling per (k, n, q, shot)
  kStreamPermutation = 4,  // reordering ensembles per (m, i)
  kStreamSynthetic = 5,    // synthetic data in tests/fits
};

}  // namespace rbwalk::rng

#endif
