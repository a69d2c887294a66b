#pragma once

// Deterministic random-number plumbing for sampling. Raw mt19937_64 output is
// converted to doubles by an explicit bit recipe (std::uniform_real_distribution
// is implementation-defined, which would break the bitwise-reproducibility
// contract of sample()).

#include <cstdint>
#include <random>

namespace demand::detail {

// SplitMix64 finalizer; decorrelates nearby integer inputs.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-partition seed derivation: sampling splits the index range into
// fixed-size partitions, each running an independent generator seeded from
// (seed, partition index). Results merge in index order, so the output is
// identical however the partitions are scheduled, and extending n preserves
// the existing prefix.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t partition) {
  return mix64(seed ^ mix64(partition + 0x632be59bd9b4e019ULL));
}

// Draws per partition.
constexpr std::uint64_t kPartitionSize = 1ULL << 16;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on (0, 1): the top 53 bits of one generator word, with exact
  // zero clamped away so inverse-CDF transforms stay finite.
  double uniform01() {
    const std::uint64_t bits = gen_() >> 11;
    const double u = static_cast<double>(bits) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace demand::detail
