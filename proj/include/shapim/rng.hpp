#pragma once

#include <cstdint>
#include <random>

namespace shapim::rng {

using Engine = std::mt19937_64;

/// Stream families; keeps streams for different purposes disjoint even when
/// they share a base seed and index.
enum class Purpose : std::uint64_t {
  spread_run = 1,
  ldag_shapley = 2,
  ldag_banzhaf = 3,
  lazy_greedy = 4,
  synthetic_graph = 5,
};

/// SplitMix64 finalizer.
std::uint64_t mix(std::uint64_t x);

/// Counter-based split: hashes (base, purpose, a, b) into one 64-bit seed.
/// Streams depend only on their coordinates, never on creation order.
std::uint64_t derive(std::uint64_t base, Purpose purpose, std::uint64_t a,
                     std::uint64_t b = 0);

inline Engine stream(std::uint64_t base, Purpose purpose, std::uint64_t a,
                     std::uint64_t b = 0) {
  return Engine(derive(base, purpose, a, b));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& e) {
  return static_cast<double>(e() >> 11) * 0x1.0p-53;
}

/// Fair coin.
inline bool coin(Engine& e) { return (e() >> 63) != 0; }

}  // namespace shapim::rng
