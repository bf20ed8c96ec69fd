#pragma once

// Tile-level building blocks shared by the single-pass binning kernel and
// the reduce-then-scan downsweep.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "onesweep/keycodec.hpp"
#include "onesweep/ranking.hpp"

namespace onesweep {

/// Per-worker tile-local storage, the CPU stand-in for shared memory.
template <SortableKey K, class V>
struct TileScratch {
  std::vector<std::uint32_t> digits;
  TileRanking ranking;
  std::vector<std::uint32_t> local_offsets;
  std::vector<std::uint32_t> exclusive;
  std::vector<std::uint64_t> base;
  std::vector<K> staged_keys;
  std::vector<V> staged_values;

  void reserve(const RadixConfig& cfg, std::size_t tile_len, bool values) {
    digits.reserve(tile_len);
    ranking.ranks.reserve(tile_len);
    local_offsets.resize(cfg.radix);
    exclusive.resize(cfg.radix);
    base.resize(cfg.radix);
    staged_keys.resize(tile_len);
    if (values) staged_values.resize(tile_len);
  }
};

/// Decodes the digit of every key in the tile at `place`.
template <SortableKey K>
void load_tile_digits(std::span<const K> keys, unsigned place,
                      const RadixConfig& cfg,
                      std::vector<std::uint32_t>& digits) {
  digits.resize(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    digits[i] = extract_digit(encode_key(keys[i]), place, cfg);
}

/// Local reorder then run-wise scatter. Elements are first staged into
/// per-digit contiguous runs (tile-local offset + rank), then each non-empty
/// run is written to out starting at base[digit]. Payloads follow keys when
/// in_values is non-empty.
template <SortableKey K, class V>
void scatter_tile(std::span<const K> in_keys, std::span<const V> in_values,
                  std::span<K> out_keys, std::span<V> out_values,
                  std::span<const std::uint64_t> base,
                  TileScratch<K, V>& s) {
  const std::size_t len = in_keys.size();
  const auto& counts = s.ranking.digit_counts;
  const auto& ranks = s.ranking.ranks;
  const std::size_t radix = counts.size();
  const bool with_values = !in_values.empty();

  std::uint32_t running = 0;
  for (std::size_t d = 0; d < radix; ++d) {
    s.local_offsets[d] = running;
    running += counts[d];
  }
  if (s.staged_keys.size() < len) s.staged_keys.resize(len);
  if (with_values && s.staged_values.size() < len) s.staged_values.resize(len);

  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t slot = s.local_offsets[s.digits[i]] + ranks[i];
    s.staged_keys[slot] = in_keys[i];
    if (with_values) s.staged_values[slot] = in_values[i];
  }
  for (std::size_t d = 0; d < radix; ++d) {
    const std::uint32_t count = counts[d];
    if (count == 0) continue;
    const std::uint32_t from = s.local_offsets[d];
    std::copy_n(s.staged_keys.begin() + from, count,
                out_keys.begin() + static_cast<std::ptrdiff_t>(base[d]));
    if (with_values)
      std::copy_n(s.staged_values.begin() + from, count,
                  out_values.begin() + static_cast<std::ptrdiff_t>(base[d]));
  }
}

}  // namespace onesweep
