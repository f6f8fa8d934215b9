#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace detox {

// Sampling and shuffling are done with an explicitly seeded std::mt19937_64
// and a hand-written Fisher-Yates walk. std::shuffle and the distribution
// classes are implementation-defined, which would make run artifacts differ
// between standard libraries; the raw engine output sequence is specified.

using Rng = std::mt19937_64;

inline std::uint64_t bounded_random(Rng& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

template <typename T>
void deterministic_shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded_random(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

/// Picks `count` distinct indices out of [0, population), returned in
/// ascending order so the caller preserves the source ordering.
inline std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count, Rng& rng) {
  std::vector<std::size_t> indices(population);
  for (std::size_t i = 0; i < population; ++i) indices[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded_random(rng, population - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(count);
  std::sort(indices.begin(), indices.end());
  return indices;
}

}  // namespace detox
