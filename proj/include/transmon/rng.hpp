#pragma once

#include <cstdint>

namespace transmon {

// Samples are drawn in fixed-size chunks, each from its own generator, so
// results do not depend on how the chunks are scheduled across workers.
inline constexpr long rng_chunk = 4096;

// splitmix64 finalizer over a stream/chunk pair.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t chunk) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (chunk + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace transmon
