#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "onesweep/keycodec.hpp"

namespace onesweep {

// Lanes per ranking batch; vote masks are one bit per lane.
inline constexpr std::size_t kLaneCount = 32;

/// Ranks one batch of up to 32 digits by bitmask votes.
///
/// For every digit bit each lane votes whether the bit is set; AND-ing the
/// matching vote (or its complement) yields the mask of lanes sharing the
/// lane's digit. The lowest lane of each population reads running[digit]
/// as the population's base and adds the population size to it. A lane's
/// rank is that base plus the number of lower lanes in its population.
void wlms_rank_into(std::span<const std::uint32_t> digits, unsigned digit_bits,
                    std::span<std::uint32_t> running,
                    std::span<std::uint32_t> ranks);

struct BatchRanking {
  std::vector<std::uint32_t> counts;  // 2^d entries
  std::vector<std::uint32_t> ranks;   // one per lane, batch-relative
};

BatchRanking wlms_rank(std::span<const std::uint32_t> digits,
                       unsigned digit_bits);

/// Tile-wide stable ranks: ranks[i] is the number of earlier tile elements
/// sharing element i's digit.
struct TileRanking {
  std::vector<std::uint32_t> digit_counts;
  std::vector<std::uint32_t> ranks;
};

void rank_tile(std::span<const std::uint32_t> digits, const RadixConfig& cfg,
               TileRanking& out);
TileRanking rank_tile(std::span<const std::uint32_t> digits,
                      const RadixConfig& cfg);

/// The digit every element of the tile shares, if any. Empty tiles never
/// qualify.
std::optional<std::uint32_t> short_circuit_check(const TileRanking& t);

}  // namespace onesweep
