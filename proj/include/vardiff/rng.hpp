#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace vardiff {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives the seed of an independent stream from (base, a, b).
///
/// Every coordinate goes through a full SplitMix64 round before being folded
/// in, so neighbouring indices give uncorrelated seeds. Streams depend only on
/// the triple, never on the order in which they are requested.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                    std::uint64_t b) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ splitmix64(a + 0x632BE59BD9B4E019ULL));
  h = splitmix64(h ^ splitmix64(b + 0x85157AF5D1B1E1A3ULL));
  return h;
}

inline Rng make_stream(std::uint64_t base, std::uint64_t a = 0,
                       std::uint64_t b = 0) {
  return Rng(derive_seed(base, a, b));
}

inline std::vector<double> normal_vector(Rng& rng, std::size_t n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(rng);
  return out;
}

}  // namespace vardiff
