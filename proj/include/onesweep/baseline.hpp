#pragma once

// Reference sorters: the sequential stable oracle and a reduce-then-scan
// LSD radix sort (upsweep, block prefix, downsweep per pass).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "onesweep/binning.hpp"
#include "onesweep/executor.hpp"
#include "onesweep/keycodec.hpp"
#include "onesweep/ranking.hpp"
#include "onesweep/tile_ops.hpp"

namespace onesweep {

/// Ascending stable sort by encoded key order. Single-threaded.
template <SortableKey K, class V>
void oracle_stable_sort(std::span<K> keys, std::span<V> values) {
  const std::size_t n = keys.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return encode_key(keys[a]) < encode_key(keys[b]);
                   });
  std::vector<K> sorted_keys(n);
  for (std::size_t i = 0; i < n; ++i) sorted_keys[i] = keys[order[i]];
  std::copy(sorted_keys.begin(), sorted_keys.end(), keys.begin());
  if (!values.empty()) {
    std::vector<V> sorted_values(n);
    for (std::size_t i = 0; i < n; ++i) sorted_values[i] = values[order[i]];
    std::copy(sorted_values.begin(), sorted_values.end(), values.begin());
  }
}

template <SortableKey K>
void oracle_stable_sort(std::span<K> keys) {
  oracle_stable_sort(keys, std::span<std::uint32_t>{});
}

/// g x r per-tile digit counts (tile-major rows).
struct BlockHistogramTable {
  std::size_t tiles = 0;
  std::uint32_t radix = 0;
  std::vector<std::uint64_t> cells;

  std::span<std::uint64_t> row(std::size_t tile) noexcept {
    return {cells.data() + tile * radix, radix};
  }
  std::span<const std::uint64_t> row(std::size_t tile) const noexcept {
    return {cells.data() + tile * radix, radix};
  }
  std::uint64_t at(std::size_t tile, std::uint32_t digit) const noexcept {
    return cells[tile * radix + digit];
  }
};

/// Upsweep: one read of the input, per-tile digit histograms.
template <SortableKey K>
BlockHistogramTable rts_upsweep(std::span<const K> keys, unsigned place,
                                const RadixConfig& cfg, Executor& exec) {
  BlockHistogramTable t;
  t.radix = cfg.radix;
  t.tiles = (keys.size() + cfg.tile_size - 1) / cfg.tile_size;
  t.cells.assign(t.tiles * t.radix, 0);
  exec.run_blocks(t.tiles, [&](BlockContext& ctx) {
    const std::size_t begin = ctx.tile() * cfg.tile_size;
    const std::size_t end = std::min(keys.size(), begin + cfg.tile_size);
    auto row = t.row(ctx.tile());
    for (std::size_t i = begin; i < end; ++i)
      ++row[extract_digit(encode_key(keys[i]), place, cfg)];
    exec.ledger_record(Phase::Upsweep, OpKind::ElementRead, end - begin);
  });
  return t;
}

/// Exclusive scan over the table in digit-major order (every tile's count of
/// digit 0, then digit 1, ...). Entry (tile, digit) of the result is the
/// absolute output index where that tile starts writing that digit.
BlockHistogramTable rts_block_prefix(const BlockHistogramTable& t);

inline BlockHistogramTable rts_block_prefix(const BlockHistogramTable& t,
                                            Executor& exec) {
  exec.ledger_record(Phase::BlockPrefix, OpKind::CounterOp,
                     2 * static_cast<std::uint64_t>(t.cells.size()));
  return rts_block_prefix(t);
}

/// Downsweep: re-reads the input, ranks each tile and scatters it through
/// the same local reorder used by the single-pass kernel.
template <SortableKey K, class V>
void rts_downsweep(std::span<const K> in_keys, std::span<const V> in_values,
                   unsigned place, const BlockHistogramTable& offsets,
                   std::span<K> out_keys, std::span<V> out_values,
                   const RadixConfig& cfg, Executor& exec,
                   std::vector<TileScratch<K, V>>& scratch) {
  if (scratch.size() < exec.workers()) scratch.resize(exec.workers());
  exec.run_blocks(offsets.tiles, [&](BlockContext& ctx) {
    auto& s = scratch[ctx.worker()];
    if (s.base.size() != cfg.radix)
      s.reserve(cfg, cfg.tile_size, !in_values.empty());
    const std::size_t begin = ctx.tile() * cfg.tile_size;
    const std::size_t len = std::min(cfg.tile_size, in_keys.size() - begin);
    const auto keys = in_keys.subspan(begin, len);
    const auto values = in_values.empty() ? std::span<const V>{}
                                          : in_values.subspan(begin, len);
    load_tile_digits(keys, place, cfg, s.digits);
    rank_tile(s.digits, cfg, s.ranking);
    const auto row = offsets.row(ctx.tile());
    std::copy(row.begin(), row.end(), s.base.begin());
    scatter_tile<K, V>(keys, values, out_keys, out_values, s.base, s);
    exec.ledger_record(Phase::Downsweep, OpKind::ElementRead, len);
    exec.ledger_record(Phase::Downsweep, OpKind::ElementWrite, len);
  });
}

template <SortableKey K, class V>
void rts_downsweep(std::span<const K> in_keys, std::span<const V> in_values,
                   unsigned place, const BlockHistogramTable& offsets,
                   std::span<K> out_keys, std::span<V> out_values,
                   const RadixConfig& cfg, Executor& exec) {
  std::vector<TileScratch<K, V>> scratch(exec.workers());
  rts_downsweep(in_keys, in_values, place, offsets, out_keys, out_values, cfg,
                exec, scratch);
}

/// Reduce-then-scan LSD radix sort. Same output contract as onesweep_sort.
template <SortableKey K, class V>
void rts_sort(std::span<K> keys, std::span<V> values, const RadixConfig& cfg,
              Executor& exec, SortWorkspace<K, V>& ws) {
  detail::check_sort_args(keys, values, cfg);
  const std::size_t n = keys.size();
  if (n <= 1) return;
  const bool with_values = !values.empty();
  ws.prepare(n, with_values, cfg, exec.workers());

  std::span<K> src_keys = keys;
  std::span<K> dst_keys = std::span<K>(ws.alt_keys).first(n);
  std::span<V> src_values = values;
  std::span<V> dst_values =
      with_values ? std::span<V>(ws.alt_values).first(n) : std::span<V>{};

  for (unsigned place = 0; place < cfg.passes; ++place) {
    const auto counts =
        rts_upsweep(std::span<const K>(src_keys), place, cfg, exec);
    const auto offsets = rts_block_prefix(counts, exec);
    rts_downsweep<K, V>(src_keys, src_values, place, offsets, dst_keys,
                        dst_values, cfg, exec, ws.tiles);
    std::swap(src_keys, dst_keys);
    std::swap(src_values, dst_values);
  }

  if (cfg.passes % 2 == 1) {
    std::copy(src_keys.begin(), src_keys.end(), keys.begin());
    if (with_values)
      std::copy(src_values.begin(), src_values.end(), values.begin());
    exec.ledger_record(Phase::FinalCopy, OpKind::Copy, n);
  }
}

template <SortableKey K, class V>
void rts_sort(std::span<K> keys, std::span<V> values, const RadixConfig& cfg,
              Executor& exec) {
  SortWorkspace<K, V> ws;
  rts_sort(keys, values, cfg, exec, ws);
}

template <SortableKey K>
void rts_sort(std::span<K> keys, const RadixConfig& cfg, Executor& exec) {
  rts_sort<K, std::uint32_t>(keys, std::span<std::uint32_t>{}, cfg, exec);
}

}  // namespace onesweep
