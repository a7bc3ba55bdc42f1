#include "adsub/random.hpp"

#include <algorithm>

namespace adsub {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ull));
}

std::vector<ItemId> sample_without_replacement(std::vector<ItemId>& pool, std::size_t s, Rng& rng) {
  s = std::min(s, pool.size());
  for (std::size_t i = 0; i < s; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  std::vector<ItemId> out(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace adsub
