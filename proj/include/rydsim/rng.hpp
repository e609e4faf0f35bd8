#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

// Deterministic random helpers.  std::uniform_real_distribution and
// std::normal_distribution are implementation-defined, so byte-identical
// reruns require explicit bit-to-double conversion.
namespace rydsim {

// splitmix64 step; used to derive independent stream seeds from (seed, index).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1) with 53 random bits.
inline double random_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n); n > 0.
inline std::size_t random_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(random_unit(rng) * static_cast<double>(n));
}

// Standard normal via Box-Muller (deterministic across platforms).
inline double random_normal(std::mt19937_64& rng) {
  double u1 = random_unit(rng);
  while (u1 <= 0.0) u1 = random_unit(rng);
  const double u2 = random_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rydsim
