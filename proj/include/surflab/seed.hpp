#pragma once

// Counter-based seed derivation. Every random number in the library is a pure
// function of (master seed, counters), so results never depend on the order or
// number of workers that produced them.
//
// Test vectors (checked in tests/test_seed.cpp):
//   finalize(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF   (first SplitMix64 output, state 0)
//   mix(0, 0)                    == 0x48218226FF3CD4BF
//   mix(42, 7)                   == 0xD56FD4491D82A4DD
//   mix(42, -1)                  == 0x0DCAA9F26429308E

#include <cstdint>

namespace surflab::seed {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 output finalizer (Stafford variant 13).
constexpr std::uint64_t finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// seed_i = mix(master, i). Not symmetric in its arguments.
constexpr std::uint64_t mix(std::uint64_t master, std::uint64_t index) {
  return finalize(master ^ finalize(index + kGolden));
}

constexpr std::uint64_t mix(std::uint64_t master, std::int64_t index) {
  return mix(master, static_cast<std::uint64_t>(index));
}

constexpr std::uint64_t mix(std::uint64_t master, int index) {
  return mix(master, static_cast<std::uint64_t>(static_cast<std::int64_t>(index)));
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stream tags used to split one realization seed into independent streams.
inline constexpr std::uint64_t kSurfaceStream = 0x5355524641434500ULL;  // "SURFACE"
inline constexpr std::uint64_t kBulkStream = 0x42554C4B00000000ULL;     // "BULK"

}  // namespace surflab::seed
