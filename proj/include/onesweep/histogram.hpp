#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "onesweep/executor.hpp"
#include "onesweep/keycodec.hpp"

namespace onesweep {

/// p x r table of 64-bit counts (or offsets), one row per digit place.
class PlaceTable {
 public:
  PlaceTable() = default;
  PlaceTable(unsigned passes, std::uint32_t radix)
      : passes_(passes),
        radix_(radix),
        cells_(static_cast<std::size_t>(passes) * radix, 0) {}

  unsigned passes() const noexcept { return passes_; }
  std::uint32_t radix() const noexcept { return radix_; }

  std::span<std::uint64_t> row(unsigned place) noexcept {
    return {cells_.data() + static_cast<std::size_t>(place) * radix_, radix_};
  }
  std::span<const std::uint64_t> row(unsigned place) const noexcept {
    return {cells_.data() + static_cast<std::size_t>(place) * radix_, radix_};
  }

  friend bool operator==(const PlaceTable&, const PlaceTable&) = default;

 private:
  unsigned passes_ = 0;
  std::uint32_t radix_ = 0;
  std::vector<std::uint64_t> cells_;
};

/// Digit counts for every place; every row sums to n.
struct GlobalHistogram {
  PlaceTable counts;
  friend bool operator==(const GlobalHistogram&, const GlobalHistogram&) =
      default;
};

/// Per-place exclusive sums of a GlobalHistogram.
struct GlobalBinOffsets {
  PlaceTable offsets;
  friend bool operator==(const GlobalBinOffsets&, const GlobalBinOffsets&) =
      default;
};

/// out[0] = 0, out[i] = out[i-1] + counts[i-1].
void exclusive_sum(std::span<const std::uint64_t> counts,
                   std::span<std::uint64_t> out) noexcept;
std::vector<std::uint64_t> exclusive_sum(std::span<const std::uint64_t> counts);

GlobalBinOffsets global_bin_offsets(const GlobalHistogram& h);

/// Upfront histogram of all digit places in a single read of the input.
///
/// Each worker owns a contiguous index range and a private p x r table of
/// 32-bit counters. The range is consumed in portions of at most
/// cfg.portion_size elements; after every portion the private counts are
/// added atomically into the shared 64-bit table and reset.
template <SortableKey K>
GlobalHistogram global_histograms(std::span<const K> keys,
                                  const RadixConfig& cfg, Executor& exec) {
  const std::size_t n = keys.size();
  const std::size_t cells = static_cast<std::size_t>(cfg.passes) * cfg.radix;
  auto shared = std::make_unique<std::atomic<std::uint64_t>[]>(cells);

  const std::size_t blocks = std::max<std::size_t>(
      1, std::min<std::size_t>(exec.workers(), n));
  const std::size_t per_block = (n + blocks - 1) / blocks;

  exec.run_blocks(blocks, [&](BlockContext& ctx) {
    const std::size_t begin = std::min(n, ctx.tile() * per_block);
    const std::size_t end = std::min(n, begin + per_block);
    std::vector<std::uint32_t> local(cells, 0);

    for (std::size_t portion = begin; portion < end;
         portion += cfg.portion_size) {
      const std::size_t stop = std::min(end, portion + cfg.portion_size);
      for (std::size_t i = portion; i < stop; ++i) {
        const auto bits = encode_key(keys[i]);
        for (unsigned place = 0; place < cfg.passes; ++place)
          ++local[place * cfg.radix + extract_digit(bits, place, cfg)];
      }
      ctx.pause();
      for (std::size_t c = 0; c < cells; ++c) {
        if (local[c] != 0) {
          shared[c].fetch_add(local[c], std::memory_order_relaxed);
          local[c] = 0;
        }
      }
    }
    exec.ledger_record(Phase::Histogram, OpKind::ElementRead, end - begin);
  });
  exec.ledger_record(Phase::Histogram, OpKind::CounterOp, cells);

  GlobalHistogram h{PlaceTable(cfg.passes, cfg.radix)};
  for (unsigned place = 0; place < cfg.passes; ++place) {
    auto row = h.counts.row(place);
    for (std::uint32_t d = 0; d < cfg.radix; ++d)
      row[d] = shared[place * cfg.radix + d].load(std::memory_order_relaxed);
  }
  return h;
}

/// Ledgered wrapper: records the p x r counter reads and writes of the scan.
inline GlobalBinOffsets global_bin_offsets(const GlobalHistogram& h,
                                           Executor& exec) {
  exec.ledger_record(Phase::ExclusiveSum, OpKind::CounterOp,
                     2 * static_cast<std::uint64_t>(h.counts.passes()) *
                         h.counts.radix());
  return global_bin_offsets(h);
}

}  // namespace onesweep
