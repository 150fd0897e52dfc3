// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_NETCORE_RNG_HPP
#define GRADPRUNE_NETCORE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gradprune {

// Deterministic randomness helpers. std::uniform_*_distribution output is
// implementation-defined, so every draw here is built from raw mt19937_64
// bits with a pinned construction. Trajectories reproduce bit-exactly for a
// given seed on any conforming platform.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from (seed, stream id [, index]).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

// Stream ids used by the experiment driver.
namespace rng_stream {
constexpr std::uint64_t kParamInit = 0x01;
constexpr std::uint64_t kSparseMask = 0x02;
constexpr std::uint64_t kShuffle = 0x03;
constexpr std::uint64_t kSynthetic = 0x04;
constexpr std::uint64_t kAugment = 0x05;
}  // namespace rng_stream

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

/// Standard normal via Box-Muller (both values consumed in order).
inline double normal(std::mt19937_64& rng) {
  // u in (0,1] so log() stays finite.
  double u = 1.0 - uniform_unit(rng);
  double v = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
}

/// Uniform integer in [0, n) by rejection (unbiased, pinned).
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

/// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

/// Identity permutation [0, n).
inline std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace gradprune

#endif  // GRADPRUNE_NETCORE_RNG_HPP
