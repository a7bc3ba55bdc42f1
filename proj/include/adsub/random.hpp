#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "adsub/types.hpp"

namespace adsub {

using Rng = std::mt19937_64;

// Seed for the index-th independent stream of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

inline Rng make_stream(std::uint64_t master, std::uint64_t index) {
  return Rng(derive_seed(master, index));
}

// Moves a uniform random s-subset of pool to its front (partial Fisher-Yates)
// and returns it as a sorted copy. pool stays a permutation of its input.
std::vector<ItemId> sample_without_replacement(std::vector<ItemId>& pool, std::size_t s, Rng& rng);

}  // namespace adsub
