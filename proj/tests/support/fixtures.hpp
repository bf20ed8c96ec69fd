#pragma once

// Shared inputs for the sorting tests.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace fixture {

/// Five tiles of 36 two-bit keys. Digit-0 counts per tile are
/// 9, 8, 10, 7, 6 (40 in total) and tile 0 holds seven 1s, so tile 1 begins
/// writing its 1s at 40 + 7 = 47.
inline std::vector<std::uint32_t> five_tile_keys() {
  constexpr std::array<std::array<std::uint32_t, 4>, 5> counts = {{
      {9, 7, 10, 10},
      {8, 9, 9, 10},
      {10, 8, 9, 9},
      {7, 10, 9, 10},
      {6, 11, 10, 9},
  }};
  std::vector<std::uint32_t> keys;
  std::mt19937 rng(36);
  for (const auto& tile : counts) {
    std::vector<std::uint32_t> t;
    for (std::uint32_t d = 0; d < 4; ++d) t.insert(t.end(), tile[d], d);
    std::shuffle(t.begin(), t.end(), rng);
    // Upper bits vary so the tile is not trivially sorted.
    for (auto& k : t) k |= (rng() % 64) << 2;
    keys.insert(keys.end(), t.begin(), t.end());
  }
  return keys;
}

inline std::vector<std::uint32_t> iota_values(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  std::iota(v.begin(), v.end(), 0u);
  return v;
}

}  // namespace fixture
