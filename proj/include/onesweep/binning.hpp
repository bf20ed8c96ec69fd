#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "onesweep/executor.hpp"
#include "onesweep/histogram.hpp"
#include "onesweep/keycodec.hpp"
#include "onesweep/lookback.hpp"
#include "onesweep/ranking.hpp"
#include "onesweep/tile_ops.hpp"

namespace onesweep {

/// Per-digit 64-bit global offsets carried from one strip of a pass to the
/// next. Before the first strip it equals the place's global bin offsets.
struct StripCarry {
  std::vector<std::uint64_t> offsets;
  friend bool operator==(const StripCarry&, const StripCarry&) = default;
};

/// Tile-path counters of a sort. Lookback reads and waits depend on the
/// schedule; the remaining fields do not.
struct SortStats {
  std::uint64_t tiles = 0;
  std::uint64_t full_tiles = 0;
  std::uint64_t fast_path_tiles = 0;
  std::uint64_t fast_path_full_tiles = 0;
  std::uint64_t strips = 0;
  std::uint64_t lookback_reads = 0;
  std::uint64_t lookback_waits = 0;
};

/// Thread-safe accumulator behind SortStats.
class SortStatsCounter {
 public:
  void add_tile(bool full, bool fast_path, std::uint64_t reads,
                std::uint64_t waits) noexcept {
    tiles_.fetch_add(1, std::memory_order_relaxed);
    if (full) full_tiles_.fetch_add(1, std::memory_order_relaxed);
    if (fast_path) fast_tiles_.fetch_add(1, std::memory_order_relaxed);
    if (full && fast_path) fast_full_.fetch_add(1, std::memory_order_relaxed);
    reads_.fetch_add(reads, std::memory_order_relaxed);
    waits_.fetch_add(waits, std::memory_order_relaxed);
  }
  void add_strip() noexcept { strips_.fetch_add(1, std::memory_order_relaxed); }

  SortStats snapshot() const noexcept {
    return {tiles_.load(), full_tiles_.load(), fast_tiles_.load(),
            fast_full_.load(), strips_.load(), reads_.load(), waits_.load()};
  }

 private:
  std::atomic<std::uint64_t> tiles_{0}, full_tiles_{0}, fast_tiles_{0},
      fast_full_{0}, strips_{0}, reads_{0}, waits_{0};
};

/// Element traffic of one tile, reported back to the ledger.
struct TileDeltas {
  std::uint64_t element_reads = 0;
  std::uint64_t element_writes = 0;
  std::uint64_t counter_ops = 0;
  std::uint64_t lookback_reads = 0;
  bool fast_path = false;
};

/// Everything a tile of one strip needs to bin itself.
template <SortableKey K, class V>
struct StripJob {
  std::span<const K> in_keys;      // the strip
  std::span<const V> in_values;    // empty when sorting keys only
  std::span<K> out_keys;           // the whole output buffer
  std::span<V> out_values;
  unsigned place = 0;
  std::span<const std::uint64_t> carry_in;  // global offsets for this strip
  std::span<std::uint64_t> carry_out;       // written by the last tile
  CounterMatrix* counters = nullptr;
  const RadixConfig* cfg = nullptr;
  std::size_t tile_size = 0;  // min(cfg.tile_size, strip length)
};

/// One tile of a chained-scan binning pass:
/// load and rank, publish local counts, look back per digit, publish
/// inclusive prefixes, then scatter (directly if the tile is homogeneous,
/// through the local reorder otherwise).
template <SortableKey K, class V>
TileDeltas process_tile(const StripJob<K, V>& job, std::size_t tile,
                        TileScratch<K, V>& s, BlockContext& ctx) {
  const RadixConfig& cfg = *job.cfg;
  CounterMatrix& counters = *job.counters;
  const std::size_t begin = tile * job.tile_size;
  const std::size_t len = std::min(job.tile_size, job.in_keys.size() - begin);
  const auto keys = job.in_keys.subspan(begin, len);
  const auto values = job.in_values.empty()
                          ? std::span<const V>{}
                          : job.in_values.subspan(begin, len);

  if (s.base.size() != cfg.radix)
    s.reserve(cfg, job.tile_size, !job.in_values.empty());

  TileDeltas deltas;
  deltas.element_reads = len;

  load_tile_digits(keys, job.place, cfg, s.digits);
  rank_tile(s.digits, cfg, s.ranking);
  ctx.pause();

  const auto& counts = s.ranking.digit_counts;
  for (std::uint32_t d = 0; d < cfg.radix; ++d)
    publish_local(counters, d, tile, counts[d]);
  ctx.pause();

  const bool last_tile = tile + 1 == counters.tiles();
  for (std::uint32_t d = 0; d < cfg.radix; ++d) {
    const auto lb = lookback_exclusive(counters, d, tile, [&] { ctx.wait(); });
    deltas.lookback_reads += lb.reads;
    const std::uint32_t inclusive = lb.exclusive + counts[d];
    publish_inclusive(counters, d, tile, inclusive);
    s.exclusive[d] = lb.exclusive;
    s.base[d] = job.carry_in[d] + lb.exclusive;
    if (last_tile) job.carry_out[d] = job.carry_in[d] + inclusive;
  }
  deltas.counter_ops = 2 * static_cast<std::uint64_t>(cfg.radix);
  ctx.pause();

  if (const auto digit = short_circuit_check(s.ranking)) {
    const auto dst = static_cast<std::ptrdiff_t>(s.base[*digit]);
    std::copy(keys.begin(), keys.end(), job.out_keys.begin() + dst);
    if (!values.empty())
      std::copy(values.begin(), values.end(), job.out_values.begin() + dst);
    deltas.fast_path = true;
  } else {
    scatter_tile<K, V>(keys, values, job.out_keys, job.out_values, s.base, s);
  }
  deltas.element_writes = len;
  return deltas;
}

/// Bins one strip (in_keys) into out_keys at `place`, starting from the
/// strip's carried global offsets. Returns the carry for the next strip.
template <SortableKey K, class V>
StripCarry partition_pass(std::span<const K> in_keys,
                          std::span<const V> in_values, std::span<K> out_keys,
                          std::span<V> out_values, unsigned place,
                          const StripCarry& carry, const RadixConfig& cfg,
                          Executor& exec,
                          std::vector<TileScratch<K, V>>& scratch,
                          SortStatsCounter& stats) {
  StripCarry next{carry.offsets};
  if (in_keys.empty()) return next;

  const std::size_t tile_size = std::min(cfg.tile_size, in_keys.size());
  const std::size_t g = (in_keys.size() + tile_size - 1) / tile_size;
  CounterMatrix counters(cfg.radix, g);
  if (scratch.size() < exec.workers()) scratch.resize(exec.workers());

  StripJob<K, V> job{in_keys,     in_values, out_keys, out_values,
                     place,       carry.offsets, next.offsets, &counters,
                     &cfg,        tile_size};

  exec.run_blocks(g, [&](BlockContext& ctx) {
    auto& s = scratch[ctx.worker()];
    const std::uint64_t waits_before = ctx.waits();
    const TileDeltas deltas = process_tile(job, ctx.tile(), s, ctx);
    exec.ledger_record(Phase::Binning, OpKind::ElementRead,
                       deltas.element_reads);
    exec.ledger_record(Phase::Binning, OpKind::ElementWrite,
                       deltas.element_writes);
    exec.ledger_record(Phase::Binning, OpKind::CounterOp, deltas.counter_ops);
    stats.add_tile(deltas.element_reads == cfg.tile_size, deltas.fast_path,
                   deltas.lookback_reads, ctx.waits() - waits_before);
  });
  stats.add_strip();
  return next;
}

template <SortableKey K, class V>
StripCarry partition_pass(std::span<const K> in_keys,
                          std::span<const V> in_values, std::span<K> out_keys,
                          std::span<V> out_values, unsigned place,
                          const StripCarry& carry, const RadixConfig& cfg,
                          Executor& exec) {
  std::vector<TileScratch<K, V>> scratch(exec.workers());
  SortStatsCounter stats;
  return partition_pass(in_keys, in_values, out_keys, out_values, place, carry,
                        cfg, exec, scratch, stats);
}

namespace detail {

template <SortableKey K, class V>
void check_sort_args(std::span<K> keys, std::span<V> values,
                     const RadixConfig& cfg) {
  if (cfg.key_bits != kKeyBits<K>)
    throw std::invalid_argument("radix config key width does not match key type");
  if (!values.empty() && values.size() != keys.size())
    throw std::invalid_argument("value array length differs from key array");
}

}  // namespace detail

/// Scratch owned across sorts: the ping-pong buffers and per-worker tile
/// storage. prepare() is the only allocating call.
template <SortableKey K, class V>
struct SortWorkspace {
  std::vector<K> alt_keys;
  std::vector<V> alt_values;
  std::vector<TileScratch<K, V>> tiles;

  void prepare(std::size_t n, bool with_values, const RadixConfig& cfg,
               unsigned workers) {
    if (alt_keys.size() < n) alt_keys.resize(n);
    if (with_values && alt_values.size() < n) alt_values.resize(n);
    if (tiles.size() < workers) tiles.resize(workers);
    for (auto& s : tiles)
      s.reserve(cfg, std::min(cfg.tile_size, n), with_values);
  }
};

/// Single-pass LSD radix sort: upfront histograms of every place, their
/// exclusive sums, then one chained-scan binning pass per place over
/// strips of at most cfg.strip_size elements. Stable; the result is left
/// in `keys` / `values`.
template <SortableKey K, class V>
SortStats onesweep_sort(std::span<K> keys, std::span<V> values,
                        const RadixConfig& cfg, Executor& exec,
                        SortWorkspace<K, V>& ws) {
  detail::check_sort_args(keys, values, cfg);
  SortStatsCounter stats;
  const std::size_t n = keys.size();
  if (n <= 1) return stats.snapshot();
  const bool with_values = !values.empty();
  ws.prepare(n, with_values, cfg, exec.workers());

  const GlobalHistogram hist =
      global_histograms(std::span<const K>(keys), cfg, exec);
  const GlobalBinOffsets offsets = global_bin_offsets(hist, exec);

  std::span<K> src_keys = keys;
  std::span<K> dst_keys = std::span<K>(ws.alt_keys).first(n);
  std::span<V> src_values = values;
  std::span<V> dst_values =
      with_values ? std::span<V>(ws.alt_values).first(n) : std::span<V>{};

  for (unsigned place = 0; place < cfg.passes; ++place) {
    const auto row = offsets.offsets.row(place);
    StripCarry carry{{row.begin(), row.end()}};
    for (std::size_t strip = 0; strip < n; strip += cfg.strip_size) {
      const std::size_t len = std::min(cfg.strip_size, n - strip);
      const auto strip_values =
          with_values ? std::span<const V>(src_values.subspan(strip, len))
                      : std::span<const V>{};
      carry = partition_pass<K, V>(
          std::span<const K>(src_keys.subspan(strip, len)), strip_values,
          dst_keys, dst_values, place, carry, cfg, exec, ws.tiles, stats);
    }
    std::swap(src_keys, dst_keys);
    std::swap(src_values, dst_values);
  }

  if (cfg.passes % 2 == 1) {
    std::copy(src_keys.begin(), src_keys.end(), keys.begin());
    if (with_values)
      std::copy(src_values.begin(), src_values.end(), values.begin());
    exec.ledger_record(Phase::FinalCopy, OpKind::Copy, n);
  }
  return stats.snapshot();
}

template <SortableKey K, class V>
SortStats onesweep_sort(std::span<K> keys, std::span<V> values,
                        const RadixConfig& cfg, Executor& exec) {
  SortWorkspace<K, V> ws;
  return onesweep_sort(keys, values, cfg, exec, ws);
}

template <SortableKey K>
SortStats onesweep_sort(std::span<K> keys, const RadixConfig& cfg,
                        Executor& exec) {
  return onesweep_sort<K, std::uint32_t>(keys, std::span<std::uint32_t>{}, cfg,
                                         exec);
}

}  // namespace onesweep
