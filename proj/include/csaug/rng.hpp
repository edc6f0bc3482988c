#pragma once

#include <cstdint>
#include <random>

namespace csaug {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for the stream of (utterance index, repetition index); independent of
/// the order in which streams are consumed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t utterance, std::uint64_t repetition) {
  return mix64(mix64(mix64(seed) ^ utterance) ^ repetition);
}

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection, so the result depends only on
/// the engine's (standardised) output sequence and not on the standard
/// library's distribution implementation.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace csaug
